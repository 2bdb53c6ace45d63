fn main() {
    std::process::exit(junta_forge::cli::run(std::env::args_os()));
}
