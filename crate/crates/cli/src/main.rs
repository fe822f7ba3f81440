fn main() {
    std::process::exit(axiblow_cli::run(std::env::args_os()));
}
