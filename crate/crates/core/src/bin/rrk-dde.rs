fn main() {
    std::process::exit(rrk_dde::cli::run(std::env::args_os()));
}
