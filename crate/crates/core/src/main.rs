fn main() {
    std::process::exit(tardos::cli::run(std::env::args_os()));
}
