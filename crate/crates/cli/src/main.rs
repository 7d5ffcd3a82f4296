use std::io::Write;

fn main() {
    let outcome = dualdefect_cli::run(std::env::args_os());
    eprint!("{}", outcome.stderr);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(outcome.code);
}
