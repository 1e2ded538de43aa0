fn main() -> std::process::ExitCode {
    bellsearch::cli::main()
}
