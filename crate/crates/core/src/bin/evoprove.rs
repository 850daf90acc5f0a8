fn main() {
    std::process::exit(evoprove::cli::run(std::env::args_os()));
}
