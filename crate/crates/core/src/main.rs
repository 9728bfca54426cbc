fn main() {
    std::process::exit(qdiscord::cli::run());
}
