fn main() {
    std::process::exit(ssopga::cli::cli_main(std::env::args_os()));
}
