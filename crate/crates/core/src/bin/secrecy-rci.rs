fn main() {
    std::process::exit(secrecy_rci::cli::parse_and_dispatch(std::env::args_os()));
}
