fn main() {
    std::process::exit(elduque::cli::run(std::env::args_os()));
}
