fn main() {
    std::process::exit(li_lab::cli::main());
}
