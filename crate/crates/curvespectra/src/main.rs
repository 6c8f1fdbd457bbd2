use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(curvespectra::cli::run())
}
