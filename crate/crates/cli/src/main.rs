fn main() {
    std::process::exit(nabla_cli::main_with_args(std::env::args_os()));
}
