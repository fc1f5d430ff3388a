fn main() {
    std::process::exit(beamspace::cli::cli(std::env::args_os()));
}
