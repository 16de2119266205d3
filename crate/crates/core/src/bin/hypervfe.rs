fn main() {
    std::process::exit(hypervfe::cli::main_with_args(std::env::args_os()));
}
