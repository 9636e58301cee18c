fn main() {
    std::process::exit(kernelbench_cli::main_with_args(std::env::args_os()));
}
