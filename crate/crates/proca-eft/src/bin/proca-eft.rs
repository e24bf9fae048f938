fn main() {
    // CLI wiring lands after the pipeline stages; see the library crate.
    eprintln!("not yet wired");
    std::process::exit(2);
}
