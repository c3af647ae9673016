//! The non-colourability formulas and the graphs they are checked on.

use modal_succinctness::colouring::{colour, cycle, k_complete, khat, noncol_equivalence, phi_n};
use modal_succinctness::MeasureKind;

fn main() {
    for n in 1..=4 {
        let f = phi_n(n);
        println!(
            "phi_{n}: length {} vars {}",
            f.len(),
            f.measure(MeasureKind::VarCount)
        );
    }
    println!("phi_2 = {}", phi_n(2));
    for (g, n) in [
        (k_complete(3), 3),
        (khat(3), 3),
        (cycle(5), 2),
        (cycle(6), 2),
    ] {
        let verdict = match colour(&g, n) {
            Some(c) => format!("{:?}", c.0),
            None => "UNCOLOURABLE".into(),
        };
        println!(
            "{} with {n} colours: {verdict}; encoding agrees: {}",
            g.name,
            noncol_equivalence(&g, n).unwrap()
        );
    }
}
