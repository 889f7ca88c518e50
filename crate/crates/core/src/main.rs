fn main() {
    std::process::exit(ratio_limit::cli::main());
}
