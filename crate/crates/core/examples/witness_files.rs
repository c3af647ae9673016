//! Witness sets in the text format: export, edit, reparse.

use modal_succinctness::textio::{builtin_witness_set, parse_witnesses, write_witnesses};

fn main() {
    let w = builtin_witness_set("symmetry").unwrap();
    let text = write_witnesses(&w);
    print!("{text}");
    let mut edited = text.clone();
    edited.push_str("khat2\n");
    let back = parse_witnesses("symmetry-plus", &edited).unwrap();
    println!(
        "reparsed: {} positives, {} negatives",
        back.positives.len(),
        back.negatives.len()
    );
}
