use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;

use ppp_coverage::sweep::{run_sweep, write_csv, write_csv_to, SweepArgs};
use ppp_coverage::Error;

fn run() -> Result<(), Error> {
    // Help and version requests exit through clap with status 0.
    let args = SweepArgs::try_parse().unwrap_or_else(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => e.exit(),
        _ => {
            eprint!("{e}");
            std::process::exit(2);
        }
    });
    let spec = args.into_spec()?;
    let curves = run_sweep(&spec)?;
    match &spec.output_path {
        Some(path) => write_csv(&curves, path)?,
        None => write_csv_to(&curves, BufWriter::new(io::stdout().lock())).map_err(|source| Error::Io {
            op: "write",
            path: "<stdout>".into(),
            source,
        })?,
    }
    if spec.progress {
        eprintln!("[ppp-coverage] wrote {} curves", curves.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
