fn main() {
    std::process::exit(log_aesthetic::io::cli::main());
}
