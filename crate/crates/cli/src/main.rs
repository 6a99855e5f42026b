fn main() {
    std::process::exit(gafheat_cli::main_with_args(std::env::args_os()));
}
