fn main() {
    std::process::exit(gevrey::cli::run(std::env::args_os()));
}
