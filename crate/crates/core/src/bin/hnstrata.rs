fn main() {
    std::process::exit(hnstrata::cli::main());
}
