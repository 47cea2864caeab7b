fn main() {
    std::process::exit(terralens::cli::run(std::env::args_os()));
}
