fn main() {
    std::process::exit(onng_cli::run(std::env::args_os()));
}
