use std::process::ExitCode;

fn main() -> ExitCode {
    datashare_contracts::cli::main()
}
