use std::process::ExitCode;

fn main() -> ExitCode {
    hyperchroma::cli::main()
}
