fn main() {
    std::process::exit(paraflow_cli::run(std::env::args_os()));
}
