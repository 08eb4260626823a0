fn main() {
    std::process::exit(pbd3::cli::run(std::env::args_os()));
}
