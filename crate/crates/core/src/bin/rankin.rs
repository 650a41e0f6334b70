fn main() {
    std::process::exit(rankin::cli::run());
}
