use std::process::ExitCode;

fn main() -> ExitCode {
    csa::cli::run()
}
