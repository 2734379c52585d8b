fn main() {
    std::process::exit(multispin_cli::main_with_args(std::env::args_os()));
}
