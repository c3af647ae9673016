//! Bisimilarity in the basic language and with the universal modalities.

use modal_succinctness::colouring::{k_complete, khat};
use modal_succinctness::kripke::{bisimilar, Frame, Model, PointedModel};
use modal_succinctness::Language;

fn main() {
    // K3 where two vertices share a valuation, against two copies of it
    // with one reflexive point
    let labels = vec![0, 0, 1];
    let k = Model::from_labels(k_complete(3), labels.clone()).unwrap();
    let doubled = labels.iter().chain(&labels).copied().collect();
    let h = Model::from_labels(khat(3), doubled).unwrap();
    let (a, b) = (PointedModel::new(h, 0), PointedModel::new(k, 0));
    for lang in [Language::Basic, Language::Global] {
        println!(
            "khat3 vs k3 in {}: {}",
            lang.name(),
            bisimilar(&a, &b, lang)
        );
    }

    // a loop is locally like a two-cycle, but an extra dead end elsewhere is
    // visible to E
    let lp = Model::empty(Frame::from_edges(1, [(0, 0)]));
    let two = Model::empty(Frame::from_edges(3, [(0, 1), (1, 0)]));
    let (x, y) = (PointedModel::new(lp, 0), PointedModel::new(two, 0));
    println!(
        "loop vs two-cycle plus dead end: basic {}, global {}",
        bisimilar(&x, &y, Language::Basic),
        bisimilar(&x, &y, Language::Global)
    );
}
