use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let ex = landau_rel_cli::execute(std::env::args_os());
    let _ = std::io::stdout().lock().write_all(ex.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(ex.stderr.as_bytes());
    ExitCode::from(ex.code as u8)
}
