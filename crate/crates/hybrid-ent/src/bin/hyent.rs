fn main() {
    std::process::exit(hybrid_ent::cli::main_with_args(std::env::args_os()));
}
