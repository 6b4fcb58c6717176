fn main() {
    std::process::exit(otclt::cli::run(std::env::args_os()));
}
