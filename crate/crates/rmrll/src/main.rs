fn main() {
    std::process::exit(rmrll::cli::run());
}
