//! Formula-complexity games on models and frames.
//!
//! A position is a pair of sets of pointed models of a [`Universe`]: Hercules
//! wants a formula true on every left and false on every right pointed model.
//! The Hydra always answers greedily, so a closed game tree is determined by
//! Hercules' moves and choices, and reading its labels gives a separating
//! formula of the same complexity.

mod solver;
mod weight;

pub use solver::{fgf_min_cost, min_cost_fgm, FgfResult, GameOptions};
pub use weight::{check_weight, special_pair_weight, WeightAssignment};

use std::fmt::{self, Write as _};

use crate::bits::BitSet;
use crate::formula::{Formula, Var};
use crate::kripke::Universe;

/// A pair of index sets over a universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GamePosition {
    pub left: BitSet,
    pub right: BitSet,
}

impl GamePosition {
    pub fn new(left: BitSet, right: BitSet) -> GamePosition {
        assert_eq!(left.len(), right.len(), "sides over different universes");
        GamePosition { left, right }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Literal { var: Var, positive: bool },
    Bot,
    Top,
    Or,
    And,
    Dia,
    Box,
    Exists,
    Forall,
}

impl Move {
    pub fn arity(self) -> usize {
        match self {
            Move::Literal { .. } | Move::Bot | Move::Top => 0,
            Move::Or | Move::And => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Literal {
                var,
                positive: true,
            } => write!(f, "{var}"),
            Move::Literal {
                var,
                positive: false,
            } => write!(f, "~{var}"),
            Move::Bot => f.write_str("F"),
            Move::Top => f.write_str("T"),
            Move::Or => f.write_str("|"),
            Move::And => f.write_str("&"),
            Move::Dia => f.write_str("<>"),
            Move::Box => f.write_str("[]"),
            Move::Exists => f.write_str("E"),
            Move::Forall => f.write_str("A"),
        }
    }
}

/// A played game tree. Modal nodes record Hercules' choice as `(from, to)`
/// pairs: one per left index for `<>`/`E`, one per right index for `[]`/`A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTree {
    pub mv: Move,
    pub position: GamePosition,
    pub choice: Vec<(u32, u32)>,
    pub children: Vec<GameTree>,
}

impl GameTree {
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(GameTree::node_count)
            .sum::<usize>()
    }

    /// Nodes in pre-order.
    pub fn preorder(&self) -> Vec<&GameTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.children.iter().rev());
        }
        out
    }

    /// Indented rendering: one node per line with its move and position.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(0, &mut s);
        s
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let set = |b: &BitSet| {
            let items: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        let _ = write!(
            out,
            "{:indent$}{} L={} R={}",
            "",
            self.mv,
            set(&self.position.left),
            set(&self.position.right),
            indent = 2 * depth
        );
        if !self.choice.is_empty() {
            let pairs: Vec<String> = self
                .choice
                .iter()
                .map(|(a, b)| format!("{a}>{b}"))
                .collect();
            let _ = write!(out, " choice={}", pairs.join(","));
        }
        out.push('\n');
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }
}

/// The formula whose syntax tree is the game tree.
pub fn psi_of_tree(t: &GameTree) -> Formula {
    let child = |i: usize| psi_of_tree(&t.children[i]);
    match t.mv {
        Move::Literal {
            var,
            positive: true,
        } => Formula::Pos(var),
        Move::Literal {
            var,
            positive: false,
        } => Formula::Neg(var),
        Move::Bot => Formula::Bot,
        Move::Top => Formula::Top,
        Move::Or => Formula::or(child(0), child(1)),
        Move::And => Formula::and(child(0), child(1)),
        Move::Dia => Formula::dia(child(0)),
        Move::Box => Formula::boxed(child(0)),
        Move::Exists => Formula::exists(child(0)),
        Move::Forall => Formula::forall(child(0)),
    }
}

/// Where and why a tree breaks the rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeViolation {
    /// Child indices from the root to the offending node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.path, self.reason)
    }
}

/// Checks every move's legality and that every child position is the greedy
/// Hydra's answer to the recorded choice.
pub fn verify_closed_tree(u: &Universe, t: &GameTree) -> Result<(), TreeViolation> {
    let mut path = Vec::new();
    verify_node(u, t, &mut path)
}

fn image(pairs: &[(u32, u32)], n: usize) -> BitSet {
    BitSet::from_indices(n, pairs.iter().map(|&(_, b)| b as usize))
}

fn union_of<'a>(n: usize, items: impl Iterator<Item = &'a [u32]>) -> BitSet {
    let mut s = BitSet::new(n);
    for it in items {
        for &j in it {
            s.insert(j as usize);
        }
    }
    s
}

/// Checks that `choice` maps every index of `domain` to one allowed target.
fn check_choice<'a>(
    n: usize,
    choice: &[(u32, u32)],
    domain: &BitSet,
    allowed: &dyn Fn(usize) -> &'a [u32],
) -> Result<(), String> {
    let mut seen = BitSet::new(n);
    for &(a, b) in choice {
        let a = a as usize;
        if !domain.contains(a) || seen.contains(a) {
            return Err(format!(
                "choice pair from {a} is not a function on the moving side"
            ));
        }
        if !allowed(a).contains(&b) {
            return Err(format!("choice {a}>{b} is not allowed"));
        }
        seen.insert(a);
    }
    if seen != *domain {
        return Err("choice does not cover the moving side".into());
    }
    Ok(())
}

fn verify_node(u: &Universe, t: &GameTree, path: &mut Vec<usize>) -> Result<(), TreeViolation> {
    let n = u.len();
    let fail = |path: &Vec<usize>, reason: String| {
        Err(TreeViolation {
            path: path.clone(),
            reason,
        })
    };
    let (l, r) = (&t.position.left, &t.position.right);
    if l.len() != n || r.len() != n {
        return fail(path, "position over another universe".into());
    }
    if t.children.len() != t.mv.arity() {
        return fail(
            path,
            format!("{} node with {} children", t.mv, t.children.len()),
        );
    }
    let kid = |i: usize| &t.children[i].position;
    let outcome: Result<(), String> = match t.mv {
        Move::Literal { var, positive } => {
            let holds = |i: usize| (u.atoms(i) & var.mask() != 0) == positive;
            if !l.iter().all(holds) {
                Err("literal false on a left pointed model".into())
            } else if r.iter().any(holds) {
                Err("literal true on a right pointed model".into())
            } else {
                Ok(())
            }
        }
        Move::Bot => {
            if l.is_empty() {
                Ok(())
            } else {
                Err("bottom with nonempty left".into())
            }
        }
        Move::Top => {
            if r.is_empty() {
                Ok(())
            } else {
                Err("top with nonempty right".into())
            }
        }
        Move::Or => {
            if kid(0).left.union(&kid(1).left) != *l || kid(0).left.intersects(&kid(1).left) {
                Err("or does not split the left side".into())
            } else if kid(0).right != *r || kid(1).right != *r {
                Err("or changes the right side".into())
            } else {
                Ok(())
            }
        }
        Move::And => {
            if kid(0).right.union(&kid(1).right) != *r || kid(0).right.intersects(&kid(1).right) {
                Err("and does not split the right side".into())
            } else if kid(0).left != *l || kid(1).left != *l {
                Err("and changes the left side".into())
            } else {
                Ok(())
            }
        }
        Move::Dia | Move::Exists => {
            let step = |i: usize| {
                if t.mv == Move::Dia {
                    u.successors(i)
                } else {
                    u.same_model(i)
                }
            };
            check_choice(n, &t.choice, l, &step).and_then(|_| {
                if kid(0).left != image(&t.choice, n) {
                    Err("left child is not the chosen image".into())
                } else if kid(0).right != union_of(n, r.iter().map(step)) {
                    Err("right child is not the greedy answer".into())
                } else {
                    Ok(())
                }
            })
        }
        Move::Box | Move::Forall => {
            let step = |i: usize| {
                if t.mv == Move::Box {
                    u.successors(i)
                } else {
                    u.same_model(i)
                }
            };
            check_choice(n, &t.choice, r, &step).and_then(|_| {
                if kid(0).right != image(&t.choice, n) {
                    Err("right child is not the chosen image".into())
                } else if kid(0).left != union_of(n, l.iter().map(step)) {
                    Err("left child is not the greedy answer".into())
                } else {
                    Ok(())
                }
            })
        }
    };
    if let Err(reason) = outcome {
        return fail(path, reason);
    }
    for (i, c) in t.children.iter().enumerate() {
        path.push(i);
        verify_node(u, c, path)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{Frame, Model};

    fn two_points() -> Universe {
        Universe::from_models(vec![
            Model::from_labels(Frame::new(1), vec![1]).unwrap(),
            Model::from_labels(Frame::new(1), vec![0]).unwrap(),
        ])
    }

    fn leaf(mv: Move, l: &[usize], r: &[usize]) -> GameTree {
        GameTree {
            mv,
            position: GamePosition::new(
                BitSet::from_indices(2, l.iter().copied()),
                BitSet::from_indices(2, r.iter().copied()),
            ),
            choice: vec![],
            children: vec![],
        }
    }

    #[test]
    fn literal_leaves() {
        let u = two_points();
        let p = Move::Literal {
            var: Var::new(1),
            positive: true,
        };
        assert!(verify_closed_tree(&u, &leaf(p, &[0], &[1])).is_ok());
        let bad = verify_closed_tree(&u, &leaf(p, &[1], &[0])).unwrap_err();
        assert!(bad.path.is_empty());
        assert_eq!(
            psi_of_tree(&leaf(
                Move::Literal {
                    var: Var::new(1),
                    positive: false
                },
                &[],
                &[]
            ))
            .to_string(),
            "~p1"
        );
    }

    #[test]
    fn bottom_needs_empty_left() {
        let u = two_points();
        assert!(verify_closed_tree(&u, &leaf(Move::Bot, &[], &[0, 1])).is_ok());
        assert!(verify_closed_tree(&u, &leaf(Move::Bot, &[0], &[1])).is_err());
    }

    #[test]
    fn greedy_violation_is_reported() {
        // 0 -> 1, 2 -> 3 with p1 at 1 only
        let u = Universe::from_models(vec![
            Model::from_labels(Frame::from_edges(2, [(0, 1)]), vec![0, 1]).unwrap(),
            Model::from_labels(Frame::from_edges(2, [(0, 1)]), vec![0, 0]).unwrap(),
        ]);
        let p = Move::Literal {
            var: Var::new(1),
            positive: true,
        };
        let child = GameTree {
            mv: p,
            position: GamePosition::new(u.set_of([1]), u.set_of([])),
            choice: vec![],
            children: vec![],
        };
        let t = GameTree {
            mv: Move::Dia,
            position: GamePosition::new(u.set_of([0]), u.set_of([2])),
            choice: vec![(0, 1)],
            children: vec![child],
        };
        let err = verify_closed_tree(&u, &t).unwrap_err();
        assert!(err.reason.contains("greedy"), "{err}");
        let mut fixed = t.clone();
        fixed.children[0].position.right = u.set_of([3]);
        assert!(verify_closed_tree(&u, &fixed).is_ok());
        assert_eq!(psi_of_tree(&fixed).to_string(), "<> p1");
        assert!(fixed.render().contains("choice=0>1"));
    }
}
