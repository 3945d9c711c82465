fn main() {
    std::process::exit(domlab::cli::run_from(std::env::args_os()));
}
