use std::io::Write;
use std::process::ExitCode;

use ncdyn::CliError;

fn main() -> ExitCode {
    let result = ncdyn::run(std::env::args_os()).and_then(|out| {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(out.as_bytes())?;
        stdout.flush()?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Parse(p) => {
                    let _ = p.print();
                }
                other => eprintln!("ncdyn: {other}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
