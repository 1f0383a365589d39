fn main() {
    std::process::exit(hirota::appcli::cli::run(std::env::args_os()));
}
