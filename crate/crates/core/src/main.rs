fn main() {
    std::process::exit(ccsynth::cli::run(std::env::args_os()));
}
