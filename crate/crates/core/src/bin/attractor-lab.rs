fn main() {
    std::process::exit(attractor_lab::cli::run(std::env::args_os()));
}
