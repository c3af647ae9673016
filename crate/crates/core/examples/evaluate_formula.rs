//! Parse a formula, evaluate it on a small model and print its measures.

use modal_succinctness::kripke::{Frame, Model};
use modal_succinctness::{parse, Language};

fn main() {
    // 0 -> 1 -> 2, p1 true at 2 only
    let frame = Frame::from_edges(3, [(0, 1), (1, 2)]);
    let model = Model::from_labels(frame, vec![0, 0, 1]).unwrap();
    for text in ["<> <> p1", "[] p1", "(~p1 & <> T)", "E p1", "A (p1 | <> T)"] {
        let f = parse(text).unwrap();
        let at: Vec<bool> = (0..3).map(|w| model.eval(w, &f)).collect();
        let measures: Vec<String> = f
            .measure_all()
            .entries(Language::Global)
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        println!("{f:<16} holds at {at:?}  {}", measures.join(" "));
    }
    let negated = parse("[] (p1 | <> ~p2)").unwrap().nnf_negate();
    println!("negation in NNF: {negated}");
}
