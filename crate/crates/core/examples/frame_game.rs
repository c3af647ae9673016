//! The game on frames: Hercules against the greedy Hydra, with the closed
//! game tree read back as a formula.

use modal_succinctness::gallery::transfer_witnesses;
use modal_succinctness::game::{fgf_min_cost, psi_of_tree, verify_closed_tree, GameOptions};
use modal_succinctness::{Language, MeasureKind};

fn main() {
    let w = transfer_witnesses(0, 1).unwrap();
    let r = fgf_min_cost(
        &w,
        &GameOptions::new(MeasureKind::Length, 8, Language::Basic, 1),
    )
    .unwrap()
    .unwrap();
    println!("cost {} formula {}", r.cost, psi_of_tree(&r.tree));
    print!("{}", r.tree.render());
    verify_closed_tree(&r.universe.universe, &r.tree).unwrap();
    for (i, &c) in r.choice.iter().enumerate() {
        let o = r.universe.universe.origin(c);
        println!(
            "negative frame {i}: Hercules picks source {} valuation {} point {}",
            o.source, o.valuation, o.point
        );
    }

    let mut depth = GameOptions::new(MeasureKind::ModalDepth, 4, Language::Basic, 1);
    depth.length_cap = 8;
    let r = fgf_min_cost(&transfer_witnesses(2, 1).unwrap(), &depth)
        .unwrap()
        .unwrap();
    println!(
        "transitivity, modal depth: {} via {}",
        r.cost,
        psi_of_tree(&r.tree)
    );
}
