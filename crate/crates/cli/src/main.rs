fn main() {
    std::process::exit(nbrw_cli::run(std::env::args_os()));
}
