fn main() {
    std::process::exit(unicover::cli::run(std::env::args_os()));
}
