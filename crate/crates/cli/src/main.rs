use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ttcur::main_with_args(std::env::args_os()))
}
