fn main() {
    std::process::exit(ideal_cli::run(std::env::args_os()));
}
