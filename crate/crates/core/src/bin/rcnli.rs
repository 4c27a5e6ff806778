fn main() {
    let mut stdout = std::io::stdout();
    std::process::exit(rcnli::cli::main_with_args(std::env::args_os(), &mut stdout));
}
