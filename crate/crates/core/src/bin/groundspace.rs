fn main() {
    std::process::exit(groundspace::cli::run());
}
