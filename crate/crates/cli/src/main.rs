fn main() {
    let code = xorbounds_cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code as i32);
}
