fn main() {
    std::process::exit(projkit::cli::run(std::env::args_os()));
}
