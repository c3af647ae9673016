//! The colouring game: the Hydra's pointed models over Khat_n against
//! Hercules' model over K_n, with the special-pair weight on the tree.

use modal_succinctness::colouring::{binary_hercules_model, ceil_log2, noncol_game_setup};
use modal_succinctness::game::{
    check_weight, min_cost_fgm, psi_of_tree, special_pair_weight, GameOptions, GamePosition,
};
use modal_succinctness::{Language, MeasureKind};

fn main() {
    for n in [2, 3] {
        let setup = noncol_game_setup(n, &binary_hercules_model(n), 0).unwrap();
        let pos = GamePosition::new(setup.left.clone(), setup.right.clone());
        let opts = GameOptions::new(MeasureKind::Length, 12, Language::Global, ceil_log2(n));
        let (cost, tree) = min_cost_fgm(&setup.universe, &pos, &opts).unwrap().unwrap();
        let w = special_pair_weight(&setup, &tree);
        println!(
            "n={n}: cost {cost}, {}; weight valid {} with root {}",
            psi_of_tree(&tree),
            check_weight(&tree, &w),
            w.root()
        );
    }
}
