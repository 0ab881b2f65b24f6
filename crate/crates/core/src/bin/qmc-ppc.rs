fn main() {
    std::process::exit(qmc_ppc::cli::run(std::env::args_os()));
}
