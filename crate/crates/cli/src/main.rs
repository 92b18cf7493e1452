fn main() {
    std::process::exit(tropaz_cli::run(std::env::args_os()));
}
