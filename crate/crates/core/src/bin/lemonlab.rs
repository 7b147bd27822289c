fn main() {
    std::process::exit(lemonlab::cli::main_with_args(std::env::args_os()));
}
