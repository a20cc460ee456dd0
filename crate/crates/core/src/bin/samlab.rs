fn main() {
    std::process::exit(samlab::cli::main_with_args(std::env::args_os()));
}
