use std::process::ExitCode;

fn main() -> ExitCode {
    hstar::cli::run()
}
