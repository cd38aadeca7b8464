use std::process::ExitCode;

fn main() -> ExitCode {
    proxy_data::cli::run(std::env::args_os())
}
