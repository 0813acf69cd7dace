use std::process::ExitCode;

fn main() -> ExitCode {
    graver_forge::cli::run()
}
