//! Exhaustive Hercules against the greedy Hydra.
//!
//! Whether Hercules can close a position within a budget is downward closed
//! in both sides, so for a right set `R` and a budget the winnable left sets
//! are described by their maximal elements. These families are computed by
//! backward induction over moves, memoized on `(R, length, measure budget)`
//! and shared by every left set, and a closed tree is read back from the
//! recorded provenance of a maximal set containing the actual left side.

use std::rc::Rc;

use rustc_hash::FxHashMap;

use super::{GamePosition, GameTree, Move};
use crate::bits::BitSet;
use crate::error::{invalid, Error, Result};
use crate::formula::{Language, MeasureKind, Symbol, Var};
use crate::gallery::WitnessSet;
use crate::kripke::{Universe, DEFAULT_NODE_CAP};
use crate::synth::WitnessUniverse;

/// Default cap on memoized (right set, budget) positions.
pub const DEFAULT_POSITION_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug)]
pub struct GameOptions {
    pub measure: MeasureKind,
    /// Costs must be strictly below the budget.
    pub budget: u32,
    /// Length cap for measures other than length.
    pub length_cap: usize,
    pub language: Language,
    /// Literals range over `p1..p<var_bound>`.
    pub var_bound: usize,
    pub position_cap: usize,
}

impl GameOptions {
    pub fn new(
        measure: MeasureKind,
        budget: u32,
        language: Language,
        var_bound: usize,
    ) -> GameOptions {
        GameOptions {
            measure,
            budget,
            length_cap: budget as usize + 2,
            language,
            var_bound,
            position_cap: DEFAULT_POSITION_CAP,
        }
    }
}

enum Prov {
    Leaf(Move),
    Unary(Move, Rc<Family>, usize),
    Or((Rc<Family>, usize), (Rc<Family>, usize)),
    And((Rc<Family>, usize), (Rc<Family>, usize)),
}

struct Family {
    right: BitSet,
    sets: Vec<(BitSet, Prov)>,
}

impl Family {
    fn covering(&self, left: &BitSet) -> Option<usize> {
        self.sets.iter().position(|(m, _)| left.is_subset(m))
    }
}

fn push(sets: &mut Vec<(BitSet, Prov)>, s: BitSet, prov: impl FnOnce() -> Prov) {
    if sets.iter().any(|(m, _)| s.is_subset(m)) {
        return;
    }
    sets.retain(|(m, _)| !m.is_subset(&s));
    sets.push((s, prov()));
}

type Key = (BitSet, u32, u64);

struct Solver<'u> {
    u: &'u Universe,
    opts: GameOptions,
    memo: FxHashMap<Key, Rc<Family>>,
    literals: Vec<(Move, BitSet)>,
}

impl<'u> Solver<'u> {
    fn new(u: &'u Universe, opts: GameOptions) -> Result<Solver<'u>> {
        if opts.language.allows_global() && !u.supports_global() {
            return Err(invalid("universe lacks same-model structure for E/A"));
        }
        if !opts.measure.applies_to(opts.language) {
            return Err(invalid(format!("measure {} does not apply", opts.measure)));
        }
        let mut literals = Vec::new();
        for v in 1..=opts.var_bound as u32 {
            let var = Var::new(v);
            let pos = u.set_of((0..u.len()).filter(|&i| u.atoms(i) & var.mask() != 0));
            literals.push((
                Move::Literal {
                    var,
                    positive: true,
                },
                pos.clone(),
            ));
            literals.push((
                Move::Literal {
                    var,
                    positive: false,
                },
                pos.complement(),
            ));
        }
        Ok(Solver {
            u,
            opts,
            memo: FxHashMap::default(),
            literals,
        })
    }

    fn leaf_ok(&self, mv: Move, k: u64) -> bool {
        match (self.opts.measure, mv) {
            (MeasureKind::VarCount, Move::Literal { var, .. }) => k & var.mask() != 0,
            (MeasureKind::Count(Symbol::Bot), Move::Bot) => k >= 1,
            (MeasureKind::Count(Symbol::Top), Move::Top) => k >= 1,
            _ => true,
        }
    }

    fn unary_budget(&self, sym: Symbol, k: u64) -> Option<u64> {
        match self.opts.measure {
            MeasureKind::Length => Some(0),
            MeasureKind::ModalDepth => k.checked_sub(1),
            MeasureKind::VarCount => Some(k),
            MeasureKind::Count(s) if s == sym => k.checked_sub(1),
            MeasureKind::Count(_) => Some(k),
        }
    }

    fn binary_budgets(&self, sym: Symbol, k: u64) -> Vec<(u64, u64)> {
        match self.opts.measure {
            MeasureKind::Length => vec![(0, 0)],
            MeasureKind::ModalDepth | MeasureKind::VarCount => vec![(k, k)],
            MeasureKind::Count(s) => {
                let total = if s == sym {
                    match k.checked_sub(1) {
                        Some(t) => t,
                        None => return vec![],
                    }
                } else {
                    k
                };
                (0..=total).map(|k1| (k1, total - k1)).collect()
            }
        }
    }

    fn step_sets(&self, mv: Move, i: usize) -> &'u [u32] {
        if matches!(mv, Move::Dia | Move::Box) {
            self.u.successors(i)
        } else {
            self.u.same_model(i)
        }
    }

    fn image_of(&self, mv: Move, set: &BitSet) -> BitSet {
        let mut out = self.u.empty_set();
        for i in set.iter() {
            for &j in self.step_sets(mv, i) {
                out.insert(j as usize);
            }
        }
        out
    }

    /// Left indices some of whose steps land in `m` (`<>`, `E`), or all of
    /// whose steps do (`[]`, `A`).
    fn preimage(&self, mv: Move, m: &BitSet) -> BitSet {
        let any = matches!(mv, Move::Dia | Move::Exists);
        self.u.set_of((0..self.u.len()).filter(|&i| {
            let steps = self.step_sets(mv, i);
            if any {
                steps.iter().any(|&j| m.contains(j as usize))
            } else {
                steps.iter().all(|&j| m.contains(j as usize))
            }
        }))
    }

    /// Minimal sets meeting every step set of `right`; `None` if some right
    /// index has no step at all.
    fn hitting_sets(&self, mv: Move, right: &BitSet) -> Result<Option<Vec<BitSet>>> {
        let mut families: Vec<BitSet> = Vec::new();
        for r in right.iter() {
            let s = self
                .u
                .set_of(self.step_sets(mv, r).iter().map(|&j| j as usize));
            if s.is_empty() {
                return Ok(None);
            }
            families.push(s);
        }
        families.sort();
        families.dedup();
        let kept: Vec<BitSet> = families
            .iter()
            .filter(|s| !families.iter().any(|t| t != *s && t.is_subset(s)))
            .cloned()
            .collect();
        let mut out: Vec<BitSet> = Vec::new();
        let mut current = self.u.empty_set();
        let cap = self.opts.position_cap;
        fn go(
            sets: &[BitSet],
            current: &mut BitSet,
            out: &mut Vec<BitSet>,
            cap: usize,
        ) -> Result<()> {
            match sets.iter().find(|s| !s.intersects(current)) {
                None => {
                    if out.len() >= cap {
                        return Err(Error::Resource {
                            what: "hitting sets",
                            needed: out.len() as u64 + 1,
                            cap: cap as u64,
                        });
                    }
                    out.push(current.clone());
                }
                Some(s) => {
                    for c in s.iter() {
                        current.insert(c);
                        go(sets, current, out, cap)?;
                        current.remove(c);
                    }
                }
            }
            Ok(())
        }
        go(&kept, &mut current, &mut out, cap)?;
        out.sort();
        out.dedup();
        let minimal: Vec<BitSet> = out
            .iter()
            .filter(|h| !out.iter().any(|g| g != *h && g.is_subset(h)))
            .cloned()
            .collect();
        Ok(Some(minimal))
    }

    fn family(&mut self, right: &BitSet, len: u32, k: u64) -> Result<Rc<Family>> {
        let key = (right.clone(), len, k);
        if let Some(f) = self.memo.get(&key) {
            return Ok(f.clone());
        }
        if self.memo.len() >= self.opts.position_cap {
            return Err(Error::Resource {
                what: "game positions",
                needed: self.memo.len() as u64 + 1,
                cap: self.opts.position_cap as u64,
            });
        }
        let mut sets: Vec<(BitSet, Prov)> = Vec::new();
        if len >= 1 {
            for (mv, ext) in &self.literals {
                if !ext.intersects(right) && self.leaf_ok(*mv, k) {
                    push(&mut sets, ext.clone(), || Prov::Leaf(*mv));
                }
            }
            if right.is_empty() && self.leaf_ok(Move::Top, k) {
                push(&mut sets, self.u.full_set(), || Prov::Leaf(Move::Top));
            }
            if self.leaf_ok(Move::Bot, k) {
                push(&mut sets, self.u.empty_set(), || Prov::Leaf(Move::Bot));
            }
        }
        if len >= 2 {
            let mut moves = vec![(Move::Dia, Symbol::Dia), (Move::Box, Symbol::Box)];
            if self.opts.language.allows_global() {
                moves.push((Move::Exists, Symbol::Exists));
                moves.push((Move::Forall, Symbol::Forall));
            }
            for (mv, sym) in moves {
                let Some(kc) = self.unary_budget(sym, k) else {
                    continue;
                };
                let targets = if matches!(mv, Move::Dia | Move::Exists) {
                    vec![self.image_of(mv, right)]
                } else {
                    match self.hitting_sets(mv, right)? {
                        Some(h) => h,
                        None => continue,
                    }
                };
                for target in targets {
                    let child = self.family(&target, len - 1, kc)?;
                    for (idx, (m, _)) in child.sets.iter().enumerate() {
                        let pre = self.preimage(mv, m);
                        push(&mut sets, pre, || Prov::Unary(mv, child.clone(), idx));
                    }
                }
            }
        }
        if len >= 3 {
            for l1 in 1..len - 1 {
                let l2 = len - 1 - l1;
                for (k1, k2) in self.binary_budgets(Symbol::Or, k) {
                    if (l1, k1) > (l2, k2) {
                        continue;
                    }
                    let a = self.family(right, l1, k1)?;
                    let b = self.family(right, l2, k2)?;
                    for (ia, (ma, _)) in a.sets.iter().enumerate() {
                        for (ib, (mb, _)) in b.sets.iter().enumerate() {
                            push(&mut sets, ma.union(mb), || {
                                Prov::Or((a.clone(), ia), (b.clone(), ib))
                            });
                        }
                    }
                }
            }
            let members: Vec<usize> = right.iter().collect();
            if members.len() >= 2 {
                let rest = &members[1..];
                // parts containing the first member; the other part is nonempty
                for mask in 0u64..(1u64 << rest.len()) - 1 {
                    let mut r1 = self.u.set_of([members[0]]);
                    for (b, &m) in rest.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            r1.insert(m);
                        }
                    }
                    let r2 = right.difference(&r1);
                    for l1 in 1..len - 1 {
                        let l2 = len - 1 - l1;
                        for (k1, k2) in self.binary_budgets(Symbol::And, k) {
                            let a = self.family(&r1, l1, k1)?;
                            let b = self.family(&r2, l2, k2)?;
                            for (ia, (ma, _)) in a.sets.iter().enumerate() {
                                for (ib, (mb, _)) in b.sets.iter().enumerate() {
                                    push(&mut sets, ma.intersection(mb), || {
                                        Prov::And((a.clone(), ia), (b.clone(), ib))
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        let fam = Rc::new(Family {
            right: right.clone(),
            sets,
        });
        self.memo.insert(key, fam.clone());
        Ok(fam)
    }

    fn first_step_in(&self, mv: Move, i: usize, target: &BitSet) -> u32 {
        *self
            .step_sets(mv, i)
            .iter()
            .find(|&&j| target.contains(j as usize))
            .expect("provenance guarantees a step into the target")
    }

    /// Plays the recorded strategy from an actual position inside the family.
    fn build(&self, fam: &Family, idx: usize, left: BitSet, right: BitSet) -> GameTree {
        let position = GamePosition::new(left.clone(), right.clone());
        match &fam.sets[idx].1 {
            Prov::Leaf(mv) => GameTree {
                mv: *mv,
                position,
                choice: vec![],
                children: vec![],
            },
            Prov::Or((a, ia), (b, ib)) => {
                let l1 = left.intersection(&a.sets[*ia].0);
                let l2 = left.difference(&l1);
                GameTree {
                    mv: Move::Or,
                    position,
                    choice: vec![],
                    children: vec![
                        self.build(a, *ia, l1, right.clone()),
                        self.build(b, *ib, l2, right),
                    ],
                }
            }
            Prov::And((a, ia), (b, ib)) => {
                let r1 = right.intersection(&a.right);
                let r2 = right.intersection(&b.right);
                GameTree {
                    mv: Move::And,
                    position,
                    choice: vec![],
                    children: vec![
                        self.build(a, *ia, left.clone(), r1),
                        self.build(b, *ib, left, r2),
                    ],
                }
            }
            Prov::Unary(mv, child, ci) => {
                let (choice, l1, r1) = if matches!(mv, Move::Dia | Move::Exists) {
                    let target = &child.sets[*ci].0;
                    let choice: Vec<(u32, u32)> = left
                        .iter()
                        .map(|l| (l as u32, self.first_step_in(*mv, l, target)))
                        .collect();
                    let l1 = self.u.set_of(choice.iter().map(|&(_, t)| t as usize));
                    (choice, l1, self.image_of(*mv, &right))
                } else {
                    let choice: Vec<(u32, u32)> = right
                        .iter()
                        .map(|r| (r as u32, self.first_step_in(*mv, r, &child.right)))
                        .collect();
                    let r1 = self.u.set_of(choice.iter().map(|&(_, t)| t as usize));
                    (choice, self.image_of(*mv, &left), r1)
                };
                GameTree {
                    mv: *mv,
                    position,
                    choice,
                    children: vec![self.build(child, *ci, l1, r1)],
                }
            }
        }
    }

    /// `(length, measure budget, cost)` triples in the order they are tried:
    /// by cost, then by length, so the first closed tree is also shortest
    /// among the cheapest.
    fn schedule(&self) -> Vec<(u32, u64, u32)> {
        let budget = self.opts.budget;
        let cap = self.opts.length_cap as u32;
        let by_length = |k: u64, cost: u32| (1..=cap).map(move |len| (len, k, cost));
        match self.opts.measure {
            MeasureKind::Length => (1..budget).map(|b| (b, 0, b)).collect(),
            MeasureKind::VarCount => {
                let vb = self.opts.var_bound.min(20);
                let mut masks: Vec<u64> = (0..1u64 << vb).collect();
                masks.sort_by_key(|m| (m.count_ones(), *m));
                masks
                    .into_iter()
                    .filter(|m| m.count_ones() < budget)
                    .flat_map(|m| by_length(m, m.count_ones()))
                    .collect()
            }
            _ => (0..budget as u64)
                .flat_map(|k| by_length(k, k as u32))
                .collect(),
        }
    }
}

/// Minimal cost of a closed game tree from `pos` against the greedy Hydra,
/// if one costs less than the budget.
pub fn min_cost_fgm(
    u: &Universe,
    pos: &GamePosition,
    opts: &GameOptions,
) -> Result<Option<(u32, GameTree)>> {
    let mut s = Solver::new(u, *opts)?;
    if pos.left.intersects(&pos.right) {
        return Ok(None);
    }
    for (len, k, cost) in s.schedule() {
        let fam = s.family(&pos.right, len, k)?;
        if let Some(idx) = fam.covering(&pos.left) {
            let tree = s.build(&fam, idx, pos.left.clone(), pos.right.clone());
            return Ok(Some((cost, tree)));
        }
    }
    Ok(None)
}

/// Outcome of the game on frames.
pub struct FgfResult {
    pub cost: u32,
    pub tree: GameTree,
    /// Hercules' pointed model (universe index) for each negative frame.
    pub choice: Vec<usize>,
    pub universe: WitnessUniverse,
}

/// The game on frames: the Hydra opens with every pointed model over the
/// positives; Hercules picks one pointed model per negative frame.
pub fn fgf_min_cost(w: &WitnessSet, opts: &GameOptions) -> Result<Option<FgfResult>> {
    let wu = WitnessUniverse::build(w, opts.var_bound, opts.language, DEFAULT_NODE_CAP)?;
    let u = &wu.universe;
    let mut left = u.empty_set();
    for g in &wu.positive_groups {
        left.union_with(g);
    }
    let groups: Vec<Vec<usize>> = wu
        .negative_groups
        .iter()
        .map(|g| g.iter().collect())
        .collect();
    let combos = groups
        .iter()
        .try_fold(1u64, |acc, g| acc.checked_mul(g.len() as u64));
    match combos {
        Some(c) if c <= opts.position_cap as u64 => {}
        _ => {
            return Err(Error::Resource {
                what: "Hercules choices",
                needed: combos.unwrap_or(u64::MAX),
                cap: opts.position_cap as u64,
            })
        }
    }
    let mut solver = Solver::new(u, *opts)?;
    let choices: Vec<Vec<usize>> = groups.iter().fold(vec![vec![]], |acc, g| {
        acc.iter()
            .flat_map(|prefix| {
                g.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    });
    let rights: Vec<BitSet> = choices
        .iter()
        .map(|c| u.set_of(c.iter().copied()))
        .collect();
    let mut found = None;
    'outer: for (len, k, cost) in solver.schedule() {
        for (c, right) in choices.iter().zip(&rights) {
            if right.intersects(&left) {
                continue;
            }
            let fam = solver.family(right, len, k)?;
            if let Some(idx) = fam.covering(&left) {
                let tree = solver.build(&fam, idx, left.clone(), right.clone());
                found = Some((cost, tree, c.clone()));
                break 'outer;
            }
        }
    }
    drop(solver);
    Ok(found.map(|(cost, tree, choice)| FgfResult {
        cost,
        tree,
        choice,
        universe: wu,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::gallery::{symmetry_witnesses, transfer_witnesses};
    use crate::game::{psi_of_tree, verify_closed_tree};
    use crate::kripke::{Frame, Model};
    use crate::synth::denotation;

    fn opts(budget: u32) -> GameOptions {
        GameOptions::new(MeasureKind::Length, budget, Language::Basic, 1)
    }

    #[test]
    fn empty_left_closes_with_bottom() {
        let u = Universe::from_models(vec![Model::empty(Frame::new(1))]);
        let pos = GamePosition::new(u.empty_set(), u.full_set());
        let (cost, t) = min_cost_fgm(&u, &pos, &opts(5)).unwrap().unwrap();
        assert_eq!(cost, 1);
        verify_closed_tree(&u, &t).unwrap();
        let mut o = opts(5);
        o.var_bound = 0;
        let (_, t) = min_cost_fgm(&u, &pos, &o).unwrap().unwrap();
        assert_eq!(t.mv, Move::Bot);
    }

    #[test]
    fn same_model_on_both_sides_never_closes() {
        let u = Universe::from_models(vec![Model::empty(Frame::new(1))]);
        let pos = GamePosition::new(u.full_set(), u.full_set());
        assert!(min_cost_fgm(&u, &pos, &opts(9)).unwrap().is_none());
    }

    #[test]
    fn reflexivity_game_costs_four() {
        let w = transfer_witnesses(0, 1).unwrap();
        let r = fgf_min_cost(&w, &opts(8)).unwrap().unwrap();
        assert_eq!(r.cost, 4);
        let u = &r.universe.universe;
        verify_closed_tree(u, &r.tree).unwrap();
        let psi = psi_of_tree(&r.tree);
        assert_eq!(psi.len(), 4);
        let den = denotation(u, &psi);
        assert!(r.tree.position.left.is_subset(&den));
        assert!(!r.tree.position.right.intersects(&den));
    }

    #[test]
    fn symmetry_game_costs_five() {
        let r = fgf_min_cost(&symmetry_witnesses(), &opts(8))
            .unwrap()
            .unwrap();
        assert_eq!(r.cost, 5);
        verify_closed_tree(&r.universe.universe, &r.tree).unwrap();
    }

    #[test]
    fn shared_frame_blocks_the_frame_game() {
        let mut w = transfer_witnesses(0, 1).unwrap();
        w.negatives.push(w.positives[0].clone());
        assert!(fgf_min_cost(&w, &opts(9)).unwrap().is_none());
    }

    #[test]
    fn other_measures_follow_the_axiom() {
        let w = transfer_witnesses(2, 1).unwrap();
        for (m, expect) in [
            (MeasureKind::Count(Symbol::Box), 2),
            (MeasureKind::Count(Symbol::Dia), 1),
            (MeasureKind::Count(Symbol::Or), 1),
            (MeasureKind::ModalDepth, 2),
            (MeasureKind::VarCount, 1),
        ] {
            let mut o = GameOptions::new(m, 5, Language::Basic, 1);
            o.length_cap = 7;
            let r = fgf_min_cost(&w, &o).unwrap().unwrap();
            assert_eq!(r.cost, expect, "{m}");
            assert_eq!(psi_of_tree(&r.tree).measure(m), expect);
            verify_closed_tree(&r.universe.universe, &r.tree).unwrap();
        }
    }

    #[test]
    fn global_moves_are_used_when_needed() {
        // left: a model where p1 holds somewhere else; right: p1 nowhere
        let u = Universe::from_models(vec![
            Model::from_labels(Frame::new(2), vec![0, 1]).unwrap(),
            Model::from_labels(Frame::new(2), vec![0, 0]).unwrap(),
        ]);
        let pos = GamePosition::new(u.set_of([0]), u.set_of([2]));
        let o = GameOptions::new(MeasureKind::Length, 6, Language::Global, 1);
        let (cost, t) = min_cost_fgm(&u, &pos, &o).unwrap().unwrap();
        assert_eq!(cost, 2);
        assert_eq!(psi_of_tree(&t), parse("E p1").unwrap());
        verify_closed_tree(&u, &t).unwrap();
    }
}
