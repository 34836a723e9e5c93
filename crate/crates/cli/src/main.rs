fn main() -> std::process::ExitCode {
    hollowshape_cli::run(std::env::args_os())
}
