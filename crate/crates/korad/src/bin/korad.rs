fn main() {
    std::process::exit(korad::cli::run(std::env::args_os()));
}
