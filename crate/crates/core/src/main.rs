use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(markovhull::cli::run())
}
