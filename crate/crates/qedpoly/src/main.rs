use std::process::exit;

fn main() {
    exit(qedpoly::cli::main());
}
