use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pathlab::run_cli(std::env::args_os()))
}
