//! Weight functions on game trees and the special-pair weight of the
//! colouring game.

use super::GameTree;
use crate::colouring::NoncolSetup;

/// One non-negative weight per node, in pre-order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAssignment(pub Vec<f64>);

impl WeightAssignment {
    pub fn root(&self) -> f64 {
        self.0[0]
    }
}

/// Whether `f` is a weight function for `t`: at most 1 on leaves, at most
/// one more than the children's sum elsewhere.
pub fn check_weight(t: &GameTree, f: &WeightAssignment) -> bool {
    let mut next = 0;
    f.0.len() == t.node_count() && check_at(t, &f.0, &mut next)
}

fn check_at(t: &GameTree, f: &[f64], next: &mut usize) -> bool {
    let own = f[*next];
    *next += 1;
    if own < 0.0 {
        return false;
    }
    let mut below = 0.0;
    for c in &t.children {
        below += f[*next];
        if !check_at(c, f, next) {
            return false;
        }
    }
    own <= below + 1.0
}

/// Per node, the number of left models `A_S` having a pointed model in the
/// left set whose point valuation equals that of some right pointed model.
pub fn special_pair_weight(setup: &NoncolSetup, t: &GameTree) -> WeightAssignment {
    let u = &setup.universe;
    WeightAssignment(
        t.preorder()
            .into_iter()
            .map(|node| {
                let right: Vec<u64> = node
                    .position
                    .right
                    .iter()
                    .filter(|&r| setup.left_model(r).is_none())
                    .map(|r| u.atoms(r))
                    .collect();
                let mut models = vec![false; setup.n];
                for l in node.position.left.iter() {
                    if let Some(s) = setup.left_model(l) {
                        if right.contains(&u.atoms(l)) {
                            models[s] = true;
                        }
                    }
                }
                models.iter().filter(|&&b| b).count() as f64
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitSet;
    use crate::formula::Var;
    use crate::game::{GamePosition, Move};

    fn leaf() -> GameTree {
        GameTree {
            mv: Move::Literal {
                var: Var::new(1),
                positive: true,
            },
            position: GamePosition::new(BitSet::new(1), BitSet::new(1)),
            choice: vec![],
            children: vec![],
        }
    }

    #[test]
    fn leaf_clause() {
        assert!(check_weight(&leaf(), &WeightAssignment(vec![1.0])));
        assert!(!check_weight(&leaf(), &WeightAssignment(vec![2.0])));
    }

    #[test]
    fn inner_clauses() {
        let t = GameTree {
            mv: Move::Or,
            position: GamePosition::new(BitSet::new(1), BitSet::new(1)),
            choice: vec![],
            children: vec![leaf(), leaf()],
        };
        assert!(check_weight(&t, &WeightAssignment(vec![3.0, 1.0, 1.0])));
        assert!(!check_weight(&t, &WeightAssignment(vec![3.5, 1.0, 1.0])));
        assert!(!check_weight(&t, &WeightAssignment(vec![1.0, 1.0])));
    }
}
