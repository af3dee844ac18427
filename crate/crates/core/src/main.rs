fn main() {
    std::process::exit(deformed_cs::cli::run(std::env::args_os()));
}
