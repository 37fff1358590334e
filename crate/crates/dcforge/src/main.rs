fn main() {
    std::process::exit(dcforge::cli::dispatch(std::env::args_os()));
}
