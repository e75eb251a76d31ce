fn main() {
    std::process::exit(tss::cli::main_entry(std::env::args_os()));
}
