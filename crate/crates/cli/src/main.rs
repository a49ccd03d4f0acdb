use std::process::ExitCode;

fn main() -> ExitCode {
    isonear::cli::main_with_args(std::env::args_os())
}
