fn main() {
    std::process::exit(happy_core::cli::main_with(std::env::args_os()));
}
