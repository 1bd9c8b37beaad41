fn main() {
    std::process::exit(rotkit::cli::run_main());
}
