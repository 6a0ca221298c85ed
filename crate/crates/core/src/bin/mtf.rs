fn main() {
    std::process::exit(multitrace::cli::main_with_args(std::env::args_os()));
}
