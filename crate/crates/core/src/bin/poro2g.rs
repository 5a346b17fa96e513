fn main() {
    std::process::exit(porous_second_gradient::cli::run(std::env::args_os()));
}
