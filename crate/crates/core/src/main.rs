fn main() {
    std::process::exit(minlen_scatter::cli::main_with_args(std::env::args_os()));
}
