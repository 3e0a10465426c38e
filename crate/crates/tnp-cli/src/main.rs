fn main() {
    std::process::exit(tnp_cli::run(std::env::args_os()));
}
