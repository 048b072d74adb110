fn main() {
    std::process::exit(ltl_tableau::cli::run(std::env::args_os()));
}
