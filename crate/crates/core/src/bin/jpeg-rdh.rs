fn main() {
    std::process::exit(jpeg_rdh::cli::run(std::env::args_os()));
}
