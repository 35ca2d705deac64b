fn main() {
    std::process::exit(qfactor::cli::run(std::env::args_os()));
}
