fn main() {
    std::process::exit(opaque_core::cli::run(std::env::args_os()));
}
