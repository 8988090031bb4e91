fn main() {
    std::process::exit(fracburgers::cli::run(std::env::args_os()));
}
