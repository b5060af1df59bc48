fn main() -> std::process::ExitCode {
    pagset::cli::run()
}
