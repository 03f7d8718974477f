use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = eulerode::cli::run(std::env::args());
    if !outcome.output.is_empty() {
        println!("{}", outcome.output);
    }
    ExitCode::from(outcome.code as u8)
}
