use std::process::ExitCode;

fn main() -> ExitCode {
    let status = scan_nacs::cli::run(std::env::args_os());
    ExitCode::from(status as u8)
}
