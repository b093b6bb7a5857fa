use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qcrit_cli::run(std::env::args_os()))
}
