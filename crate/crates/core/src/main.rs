fn main() {
    std::process::exit(minicone::cli::run());
}
