//! Regenerate the shipped coefficient table:
//! `cargo run --example gen_surfaces > crates/core/data/dtu10mw_surfaces.txt`

fn main() {
    print!("{}", tlac::turbine::surrogate_surfaces().to_text());
}
