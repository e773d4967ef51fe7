fn main() {
    std::process::exit(kronecker_duality::cli::run(std::env::args_os()));
}
