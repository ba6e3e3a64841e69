fn main() {
    std::process::exit(kgraph::cli::run());
}
