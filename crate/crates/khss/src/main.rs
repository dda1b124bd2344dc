fn main() {
    std::process::exit(khss::cli::run(std::env::args_os()));
}
