fn main() {
    std::process::exit(qqlab_cli::cli_main(std::env::args_os()));
}
