fn main() {
    let code = hardylog::cli::run(std::env::args_os(), std::env::vars());
    std::process::exit(code);
}
