//! Exhaustive synthesis: the shortest formula true on one set of pointed
//! models and false on another, and minimal separators of witness frames.

use modal_succinctness::gallery::{s4_witnesses, transfer_witnesses};
use modal_succinctness::kripke::{Frame, Model, Universe, DEFAULT_NODE_CAP};
use modal_succinctness::synth::{min_frame_separator, min_separating, WitnessUniverse};
use modal_succinctness::{Language, MeasureKind};

fn main() {
    // a two-step path against a one-step path, p1 at the ends
    let long = Model::from_labels(Frame::from_edges(3, [(0, 1), (1, 2)]), vec![0, 0, 1]).unwrap();
    let short = Model::from_labels(Frame::from_edges(2, [(0, 1)]), vec![0, 1]).unwrap();
    let u = Universe::from_models(vec![long, short]);
    let (left, right) = (
        u.set_of([u.index_of(0, 0, 0)]),
        u.set_of([u.index_of(1, 0, 0)]),
    );
    let found = min_separating(
        &u,
        &left,
        &right,
        MeasureKind::Length,
        1,
        6,
        Language::Basic,
    )
    .unwrap();
    println!("path separator: {}", found.unwrap().0);

    for w in [transfer_witnesses(2, 1).unwrap(), s4_witnesses()] {
        let wu = WitnessUniverse::build(&w, 1, Language::Basic, DEFAULT_NODE_CAP).unwrap();
        for kind in [MeasureKind::Length, MeasureKind::ModalDepth] {
            let (f, m) = min_frame_separator(&wu, kind, 1, 10, Language::Basic)
                .unwrap()
                .unwrap();
            println!("{}: min {kind} {} via {f}", w.name, m.get(kind));
        }
    }
}
