use std::io::Write;

fn main() {
    let out = multiarr::cli::main_with_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
