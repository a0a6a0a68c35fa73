fn main() {
    std::process::exit(entroscope::main_with(std::env::args_os()));
}
