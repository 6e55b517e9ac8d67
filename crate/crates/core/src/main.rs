fn main() -> std::process::ExitCode {
    decayqueue::cli::main()
}
