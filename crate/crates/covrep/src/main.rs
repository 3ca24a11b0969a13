fn main() {
    std::process::exit(covrep::cli::main_with_args(std::env::args_os()));
}
