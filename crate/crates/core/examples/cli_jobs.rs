//! Running command-line jobs from code.

use multiarr::cli::{run, Command, JobSpec};

fn main() {
    let jobs = [
        JobSpec::new(Command::Chi).poly("x^2y^2z(x+y+z)(x-y+z)", &["x", "y", "z"]),
        JobSpec::new(Command::Exponents).poly("x^3y^3(x-y)(x+y)", &["x", "y"]),
        JobSpec::new(Command::CheckFree).poly("x^2y(x-y)(x-z)(y-z)^2", &["x", "y", "z"]).json(),
    ];
    for job in &jobs {
        let out = run(job);
        println!("exit {}", out.code);
        print!("{}", out.stdout);
    }
}
