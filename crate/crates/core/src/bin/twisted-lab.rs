fn main() {
    std::process::exit(twisted_lab::cli::main_with_args(std::env::args_os()));
}
