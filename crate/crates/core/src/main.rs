fn main() {
    std::process::exit(felphase::cli::main_with(std::env::args_os()));
}
