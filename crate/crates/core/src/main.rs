fn main() -> std::process::ExitCode {
    rz_strata::cli::main()
}
