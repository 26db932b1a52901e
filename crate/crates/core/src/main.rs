fn main() {
    std::process::exit(mu_torsion::cli::main_with_args(std::env::args_os()));
}
