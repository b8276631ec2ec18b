use std::process::ExitCode;

fn main() -> ExitCode {
    let code = orthobasis_cli::run(std::env::args_os(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
