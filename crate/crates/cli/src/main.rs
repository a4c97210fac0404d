fn main() {
    std::process::exit(waiter_cli::run(std::env::args_os()));
}
