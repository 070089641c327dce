fn main() {
    std::process::exit(smallcuts::cli::main());
}
