fn main() {
    std::process::exit(evotrace_server::cli_main(std::env::args_os()));
}
