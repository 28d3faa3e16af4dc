fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(narx_dd_cli::run_command(&args));
}
