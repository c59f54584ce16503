fn main() {
    std::process::exit(eyefilt_cli::dispatch(std::env::args_os()));
}
