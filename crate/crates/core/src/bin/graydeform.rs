fn main() {
    std::process::exit(graydeform::cli::main_with_args(std::env::args_os()));
}
