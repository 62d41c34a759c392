fn main() {
    std::process::exit(berger::cli::main_with(std::env::args_os()));
}
