use std::io::Write;

fn main() {
    logderham::cli::configure_threads();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code =
        logderham::cli::dispatch(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
