fn main() {
    std::process::exit(fik::cli::main());
}
