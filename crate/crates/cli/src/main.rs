fn main() {
    std::process::exit(peterson_cli::run(std::env::args_os()));
}
