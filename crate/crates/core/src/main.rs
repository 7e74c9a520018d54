fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(emergence::cli::main_with_args(std::env::args_os()))
}
