fn main() {
    tt_core::cli::main()
}
