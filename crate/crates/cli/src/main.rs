fn main() {
    std::process::exit(kjnn_cli::cli_run(std::env::args_os()));
}
