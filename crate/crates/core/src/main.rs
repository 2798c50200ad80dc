use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(landau::cli::main_with(std::env::args_os()))
}
