fn main() {
    std::process::exit(ris_secrecy_cli::run(std::env::args_os()));
}
