fn main() {
    std::process::exit(swanson_cli::run(std::env::args_os()));
}
