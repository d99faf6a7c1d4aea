fn main() {
    std::process::exit(cylwig::cli::run(std::env::args()));
}
