use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = randtensor_cli::run(&argv);
    if result.exit_code <= 1 {
        print!("{}", result.summary);
    } else {
        eprint!("{}", result.summary);
    }
    ExitCode::from(result.exit_code as u8)
}
