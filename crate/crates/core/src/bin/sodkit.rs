fn main() {
    std::process::exit(sodkit::cli::parse_and_dispatch(std::env::args_os()));
}
