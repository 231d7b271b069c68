fn main() {
    std::process::exit(embedlab_cli::run(std::env::args_os()));
}
