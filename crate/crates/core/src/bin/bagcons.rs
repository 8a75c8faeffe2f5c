fn main() {
    std::process::exit(bagcons::cli::run(std::env::args_os()));
}
