fn main() {
    std::process::exit(hangul_obfus::cli::main_with_args(std::env::args_os()));
}
