fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, out) = grpd_conv_cli::run(&argv);
    print!("{out}");
    std::process::exit(code);
}
