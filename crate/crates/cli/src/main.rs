fn main() {
    let stdout = std::io::stdout();
    let code = tallest_column_cli::run_with_args(std::env::args_os(), &mut stdout.lock());
    std::process::exit(code);
}
