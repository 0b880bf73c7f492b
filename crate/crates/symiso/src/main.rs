use std::process::ExitCode;

fn main() -> ExitCode {
    symiso::cli::main()
}
