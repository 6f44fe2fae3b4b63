fn main() {
    std::process::exit(isograph::cli::run(std::env::args_os()));
}
