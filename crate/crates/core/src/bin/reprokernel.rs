fn main() {
    std::process::exit(reprokernel::cli::main_with_args(std::env::args_os()));
}
