fn main() {
    std::process::exit(spaceform_float::cli::run());
}
