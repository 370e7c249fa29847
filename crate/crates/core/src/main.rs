fn main() -> std::process::ExitCode {
    netsearch::cli::main_entry()
}
