fn main() {
    std::process::exit(uinf_cli::main_with_args(std::env::args_os()));
}
