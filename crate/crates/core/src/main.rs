fn main() {
    let code = detsum::cli::parse_and_dispatch(std::env::args_os());
    std::process::exit(code);
}
