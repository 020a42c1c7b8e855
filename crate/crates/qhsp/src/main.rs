fn main() {
    std::process::exit(qhsp::cli::run());
}
