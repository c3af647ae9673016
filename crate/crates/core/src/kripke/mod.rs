//! Finite Kripke frames and models, evaluation, frame validity and bisimulation.

mod bisim;
mod universe;

pub use bisim::{bisimilar, bisimilar_on, refine_partition, Partition};
pub use universe::{Origin, Universe, DEFAULT_NODE_CAP};

use crate::bits::BitSet;
use crate::error::{invalid, Error, Result};
use crate::formula::{Formula, Var};

/// Default cap on `states * variables` when quantifying over valuations.
pub const DEFAULT_VALIDITY_CAP_BITS: u32 = 24;

/// A finite frame: states `0..state_count` and their successor lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub name: String,
    succ: Vec<Vec<u32>>,
}

impl Frame {
    pub fn new(state_count: usize) -> Frame {
        assert!(state_count >= 1, "a frame needs at least one state");
        Frame {
            name: String::new(),
            succ: vec![Vec::new(); state_count],
        }
    }

    pub fn from_edges(
        state_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Frame {
        let mut f = Frame::new(state_count);
        for (u, v) in edges {
            f.add_edge(u, v);
        }
        f
    }

    pub fn named(mut self, name: impl Into<String>) -> Frame {
        self.name = name.into();
        self
    }

    /// Adds `u -> v`; duplicates are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        let n = self.state_count();
        assert!(u < n && v < n, "edge ({u},{v}) out of range for {n} states");
        let list = &mut self.succ[u];
        if let Err(at) = list.binary_search(&(v as u32)) {
            list.insert(at, v as u32);
        }
    }

    /// Appends a fresh state and returns its index.
    pub fn add_state(&mut self) -> usize {
        self.succ.push(Vec::new());
        self.succ.len() - 1
    }

    pub fn state_count(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, u: usize) -> &[u32] {
        &self.succ[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v as usize)))
    }

    pub fn reflexive_states(&self) -> Vec<usize> {
        (0..self.state_count())
            .filter(|&u| self.has_edge(u, u))
            .collect()
    }

    /// Row `u` holds the successors of `u`.
    pub fn relation_rows(&self) -> Vec<BitSet> {
        let n = self.state_count();
        self.succ
            .iter()
            .map(|vs| BitSet::from_indices(n, vs.iter().map(|&v| v as usize)))
            .collect()
    }

    /// Disjoint union; states of `other` are shifted by `self.state_count()`.
    pub fn disjoint_union(&self, other: &Frame) -> Frame {
        let shift = self.state_count() as u32;
        let mut succ = self.succ.clone();
        succ.extend(
            other
                .succ
                .iter()
                .map(|vs| vs.iter().map(|&v| v + shift).collect()),
        );
        Frame {
            name: format!("{}+{}", self.name, other.name),
            succ,
        }
    }

    /// Number of valuations of `vars` variables on this frame, if it fits the cap.
    pub(crate) fn valuation_bits(&self, vars: usize, cap_bits: u32) -> Result<u32> {
        let bits = (self.state_count() * vars) as u64;
        if bits > cap_bits as u64 {
            return Err(Error::Resource {
                what: "valuation bits (states x variables)",
                needed: bits,
                cap: cap_bits as u64,
            });
        }
        Ok(bits as u32)
    }
}

/// A frame with a valuation, stored as one variable mask per state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub frame: Frame,
    labels: Vec<u64>,
}

impl Model {
    /// The model where every variable is false everywhere.
    pub fn empty(frame: Frame) -> Model {
        let n = frame.state_count();
        Model {
            frame,
            labels: vec![0; n],
        }
    }

    /// Builds a model from per-state variable masks (bit `i-1` is `p<i>`).
    pub fn from_labels(frame: Frame, labels: Vec<u64>) -> Result<Model> {
        if labels.len() != frame.state_count() {
            return Err(invalid(format!(
                "{} labels for {} states",
                labels.len(),
                frame.state_count()
            )));
        }
        Ok(Model { frame, labels })
    }

    /// Builds a model from a map variable -> set of states.
    pub fn from_valuation(frame: Frame, valuation: &[(Var, Vec<usize>)]) -> Result<Model> {
        let mut m = Model::empty(frame);
        for (v, states) in valuation {
            for &s in states {
                if s >= m.state_count() {
                    return Err(invalid(format!(
                        "state {s} in valuation of {v} out of range"
                    )));
                }
                m.labels[s] |= v.mask();
            }
        }
        Ok(m)
    }

    pub fn state_count(&self) -> usize {
        self.frame.state_count()
    }

    pub fn label(&self, state: usize) -> u64 {
        self.labels[state]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn holds(&self, var: Var, state: usize) -> bool {
        self.labels[state] & var.mask() != 0
    }

    pub fn set(&mut self, var: Var, state: usize, value: bool) {
        if value {
            self.labels[state] |= var.mask();
        } else {
            self.labels[state] &= !var.mask();
        }
    }

    /// The set of states where `var` holds.
    pub fn valuation_of(&self, var: Var) -> BitSet {
        BitSet::from_indices(
            self.state_count(),
            (0..self.state_count()).filter(|&s| self.holds(var, s)),
        )
    }

    /// Mask of every variable true somewhere in the model.
    pub fn var_mask(&self) -> u64 {
        self.labels.iter().fold(0, |m, l| m | l)
    }

    /// The set of states satisfying `f`.
    pub fn extension(&self, f: &Formula) -> BitSet {
        let n = self.state_count();
        match f {
            Formula::Top => BitSet::full(n),
            Formula::Bot => BitSet::new(n),
            Formula::Pos(v) => self.valuation_of(*v),
            Formula::Neg(v) => self.valuation_of(*v).complement(),
            Formula::Or(a, b) => self.extension(a).union(&self.extension(b)),
            Formula::And(a, b) => self.extension(a).intersection(&self.extension(b)),
            Formula::Dia(a) => {
                let inner = self.extension(a);
                BitSet::from_indices(
                    n,
                    (0..n).filter(|&s| {
                        self.frame
                            .successors(s)
                            .iter()
                            .any(|&t| inner.contains(t as usize))
                    }),
                )
            }
            Formula::Box(a) => {
                let inner = self.extension(a);
                BitSet::from_indices(
                    n,
                    (0..n).filter(|&s| {
                        self.frame
                            .successors(s)
                            .iter()
                            .all(|&t| inner.contains(t as usize))
                    }),
                )
            }
            Formula::Exists(a) => {
                if self.extension(a).is_empty() {
                    BitSet::new(n)
                } else {
                    BitSet::full(n)
                }
            }
            Formula::Forall(a) => {
                if self.extension(a).is_full() {
                    BitSet::full(n)
                } else {
                    BitSet::new(n)
                }
            }
        }
    }

    /// Truth of `f` at `state`.
    pub fn eval(&self, state: usize, f: &Formula) -> bool {
        self.extension(f).contains(state)
    }

    pub fn pointed(self, point: usize) -> PointedModel {
        PointedModel::new(self, point)
    }
}

/// A model with a designated point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedModel {
    pub model: Model,
    pub point: usize,
}

impl PointedModel {
    pub fn new(model: Model, point: usize) -> PointedModel {
        assert!(point < model.state_count(), "point {point} out of range");
        PointedModel { model, point }
    }

    pub fn satisfies(&self, f: &Formula) -> bool {
        self.model.eval(self.point, f)
    }
}

/// Truth of `f` at `w` in `m`. Variables without a valuation entry are false.
pub fn eval(m: &Model, w: usize, f: &Formula) -> bool {
    m.eval(w, f)
}

/// Iterates over all valuations of `vars` on `frame`, in binary order of the
/// concatenated per-variable state sets.
pub(crate) fn for_each_valuation(
    frame: &Frame,
    vars: &[Var],
    mut visit: impl FnMut(&Model) -> bool,
) {
    let n = frame.state_count();
    let bits = n * vars.len();
    let mut model = Model::empty(frame.clone());
    for code in 0u64..(1u64 << bits) {
        for (vi, v) in vars.iter().enumerate() {
            for s in 0..n {
                model.set(*v, s, code >> (vi * n + s) & 1 == 1);
            }
        }
        if !visit(&model) {
            return;
        }
    }
}

/// A valuation of the occurring variables and a point refuting `f` on `frame`.
pub fn find_refutation(frame: &Frame, f: &Formula, cap_bits: u32) -> Result<Option<PointedModel>> {
    let vars = f.vars();
    frame.valuation_bits(vars.len(), cap_bits)?;
    let mut found = None;
    for_each_valuation(frame, &vars, |m| {
        let ext = m.extension(f);
        match ext.complement().first() {
            Some(w) => {
                found = Some(PointedModel::new(m.clone(), w));
                false
            }
            None => true,
        }
    });
    Ok(found)
}

/// Validity of `f` on `frame` under the default cap.
pub fn frame_valid(frame: &Frame, f: &Formula) -> Result<bool> {
    frame_valid_capped(frame, f, DEFAULT_VALIDITY_CAP_BITS)
}

/// Validity of `f` on `frame`: true at every point under every valuation of
/// the variables occurring in `f`.
pub fn frame_valid_capped(frame: &Frame, f: &Formula, cap_bits: u32) -> Result<bool> {
    Ok(find_refutation(frame, f, cap_bits)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn loop1() -> Frame {
        Frame::from_edges(1, [(0, 0)])
    }

    #[test]
    fn evaluates_reflexive_and_dead_points() {
        let v = Var::new(1);
        let m = Model::from_valuation(loop1(), &[(v, vec![0])]).unwrap();
        assert!(m.eval(0, &parse("<> p1").unwrap()));
        let dead = Model::empty(Frame::new(1));
        assert!(dead.eval(0, &parse("[] F").unwrap()));
        assert!(!dead.eval(0, &parse("<> T").unwrap()));
    }

    #[test]
    fn global_modalities_are_point_independent() {
        let f = Frame::from_edges(3, [(0, 1)]);
        let m = Model::from_labels(f, vec![0, 0, 1]).unwrap();
        let ex = parse("E p1").unwrap();
        let fa = parse("A p1").unwrap();
        for w in 0..3 {
            assert!(m.eval(w, &ex));
            assert!(!m.eval(w, &fa));
        }
    }

    #[test]
    fn reflexivity_axiom_on_small_frames() {
        let t = parse("(~p1 | <> p1)").unwrap();
        assert!(frame_valid(&loop1(), &t).unwrap());
        // irreflexive root below a reflexive point
        let b = Frame::from_edges(2, [(0, 1), (1, 1)]);
        assert!(!frame_valid(&b, &t).unwrap());
        let r = find_refutation(&b, &t, 24).unwrap().unwrap();
        assert_eq!(r.point, 0);
        assert_eq!(r.model.labels(), &[1, 0]);
    }

    #[test]
    fn validity_cap_is_enforced() {
        let big = Frame::new(13);
        let f = parse("(p1 | ~p2)").unwrap();
        assert!(matches!(frame_valid(&big, &f), Err(Error::Resource { .. })));
        assert!(frame_valid_capped(&big, &f, 26).is_ok());
    }

    #[test]
    fn duplicate_edges_are_ignored() {
        let f = Frame::from_edges(2, [(0, 1), (0, 1), (1, 0)]);
        assert_eq!(f.edge_count(), 2);
    }
}
