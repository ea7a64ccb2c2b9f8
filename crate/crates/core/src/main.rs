fn main() {
    std::process::exit(tilted_ising::cli::run(std::env::args_os()));
}
