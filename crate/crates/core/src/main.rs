fn main() {
    std::process::exit(bhlab::cli::run());
}
