fn main() {
    std::process::exit(shiftperc_cli::run(std::env::args_os()));
}
