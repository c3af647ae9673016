//! Decide frame validity by quantifying over all valuations, and print a
//! refuting pointed model when a formula fails.

use modal_succinctness::gallery::{axiom, transfer_witnesses, FrameProperty};
use modal_succinctness::kripke::{find_refutation, frame_valid, Frame, DEFAULT_VALIDITY_CAP_BITS};

fn main() {
    let refl = axiom(FrameProperty::Reflexive).unwrap();
    let w = transfer_witnesses(0, 1).unwrap();
    for f in w.frames() {
        println!("{refl} on {}: {}", f.name, frame_valid(f, &refl).unwrap());
    }
    // an irreflexive root below a reflexive point
    let b = Frame::from_edges(2, [(0, 1), (1, 1)]).named("B");
    if let Some(pm) = find_refutation(&b, &refl, DEFAULT_VALIDITY_CAP_BITS).unwrap() {
        println!(
            "refuted on B at point {} with labels {:?}",
            pm.point,
            pm.model.labels()
        );
    }
    let trans = axiom(FrameProperty::Transitive).unwrap();
    let chain = Frame::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
    println!(
        "{trans} on a transitive chain: {}",
        frame_valid(&chain, &trans).unwrap()
    );
}
