fn main() {
    std::process::exit(itw_cli::run(std::env::args_os()));
}
