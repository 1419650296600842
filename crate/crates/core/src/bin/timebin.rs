fn main() {
    std::process::exit(timebin::cli::main());
}
