fn main() {
    std::process::exit(fluxspec::cli::run(std::env::args_os()));
}
