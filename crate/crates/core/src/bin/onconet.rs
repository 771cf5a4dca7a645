fn main() {
    std::process::exit(onconet::cli::run(std::env::args()));
}
