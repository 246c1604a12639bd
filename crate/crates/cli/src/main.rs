use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let res = wzeta_cli::run_command(&args);
    print!("{}", res.stdout);
    eprint!("{}", res.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(res.code);
}
