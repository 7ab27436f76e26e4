fn main() {
    std::process::exit(mdm_spectra::cli::run());
}
