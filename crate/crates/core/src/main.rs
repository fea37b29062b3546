fn main() {
    std::process::exit(torhom::cli::run(std::env::args_os()));
}
