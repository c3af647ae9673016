//! Witness frame families, decidable frame properties and the axioms that
//! define them.
//!
//! Each witness set pairs frames that have a property (positives) with frames
//! that lack it (negatives). A formula valid on every positive and on no
//! negative must be at least as complex as the minimal separator, which is
//! how the lower bounds are certified.

use std::fmt;

use crate::bits::BitSet;
use crate::error::{invalid, Result};
use crate::formula::Formula;
use crate::kripke::Frame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameProperty {
    /// `x R^m y` implies `x R^n y`.
    Transfer {
        m: usize,
        n: usize,
    },
    Reflexive,
    Transitive,
    Symmetric,
    ConverseWellFounded,
    ReflexiveTransitive,
    TransitiveCWF,
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameProperty::Transfer { m, n } => write!(f, "transfer({m},{n})"),
            FrameProperty::Reflexive => f.write_str("reflexive"),
            FrameProperty::Transitive => f.write_str("transitive"),
            FrameProperty::Symmetric => f.write_str("symmetric"),
            FrameProperty::ConverseWellFounded => f.write_str("converse-well-founded"),
            FrameProperty::ReflexiveTransitive => f.write_str("reflexive-transitive"),
            FrameProperty::TransitiveCWF => f.write_str("transitive-cwf"),
        }
    }
}

/// `R^k` as successor rows; `R^0` is the identity.
pub fn relation_power(f: &Frame, k: usize) -> Vec<BitSet> {
    let n = f.state_count();
    let rows = f.relation_rows();
    let mut acc: Vec<BitSet> = (0..n).map(|u| BitSet::from_indices(n, [u])).collect();
    for _ in 0..k {
        acc = acc
            .iter()
            .map(|row| {
                let mut next = BitSet::new(n);
                for v in row.iter() {
                    next.union_with(&rows[v]);
                }
                next
            })
            .collect();
    }
    acc
}

fn acyclic(f: &Frame) -> bool {
    let n = f.state_count();
    let mut indegree = vec![0usize; n];
    for (_, v) in f.edges() {
        indegree[v] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&u| indegree[u] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &v in f.successors(u) {
            indegree[v as usize] -= 1;
            if indegree[v as usize] == 0 {
                stack.push(v as usize);
            }
        }
    }
    seen == n
}

pub fn check_property(f: &Frame, p: FrameProperty) -> bool {
    match p {
        FrameProperty::Transfer { m, n } => {
            let rm = relation_power(f, m);
            let rn = relation_power(f, n);
            rm.iter().zip(&rn).all(|(a, b)| a.is_subset(b))
        }
        FrameProperty::Reflexive => check_property(f, FrameProperty::Transfer { m: 0, n: 1 }),
        FrameProperty::Transitive => check_property(f, FrameProperty::Transfer { m: 2, n: 1 }),
        FrameProperty::Symmetric => f.edges().all(|(u, v)| f.has_edge(v, u)),
        FrameProperty::ConverseWellFounded => acyclic(f),
        FrameProperty::ReflexiveTransitive => {
            check_property(f, FrameProperty::Reflexive)
                && check_property(f, FrameProperty::Transitive)
        }
        FrameProperty::TransitiveCWF => check_property(f, FrameProperty::Transitive) && acyclic(f),
    }
}

/// The defining axiom of a property, in one variable.
pub fn axiom(p: FrameProperty) -> Result<Formula> {
    let p1 = || Formula::pos(1);
    let np1 = || Formula::neg(1);
    Ok(match p {
        FrameProperty::Transfer { m, n } if m != n => {
            Formula::or(Formula::box_n(m, np1()), Formula::dia_n(n, p1()))
        }
        FrameProperty::Transfer { .. } => return Err(invalid("transfer(m,m) is trivial")),
        FrameProperty::Reflexive => axiom(FrameProperty::Transfer { m: 0, n: 1 })?,
        FrameProperty::Transitive => axiom(FrameProperty::Transfer { m: 2, n: 1 })?,
        FrameProperty::Symmetric => Formula::or(np1(), Formula::boxed(Formula::dia(p1()))),
        FrameProperty::ReflexiveTransitive => Formula::or(
            Formula::and(np1(), Formula::box_n(2, np1())),
            Formula::dia(p1()),
        ),
        FrameProperty::TransitiveCWF => Formula::or(
            Formula::boxed(np1()),
            Formula::dia(Formula::and(p1(), Formula::boxed(np1()))),
        ),
        FrameProperty::ConverseWellFounded => {
            return Err(invalid("converse well-foundedness alone has no axiom here"))
        }
    })
}

#[derive(Clone, Debug)]
pub struct WitnessSet {
    pub name: String,
    pub property: Option<FrameProperty>,
    pub positives: Vec<Frame>,
    pub negatives: Vec<Frame>,
    pub recommended_var_bound: usize,
}

impl WitnessSet {
    /// A witness set checked against `property`: panics if a positive lacks
    /// it or a negative has it.
    pub fn asserted(
        name: impl Into<String>,
        property: FrameProperty,
        positives: Vec<Frame>,
        negatives: Vec<Frame>,
    ) -> WitnessSet {
        let name = name.into();
        for f in &positives {
            assert!(
                check_property(f, property),
                "{name}: positive {} lacks {property}",
                f.name
            );
        }
        for f in &negatives {
            assert!(
                !check_property(f, property),
                "{name}: negative {} has {property}",
                f.name
            );
        }
        WitnessSet {
            name,
            property: Some(property),
            positives,
            negatives,
            recommended_var_bound: 1,
        }
    }

    /// A witness set without an associated property (e.g. read from a file).
    pub fn unchecked(
        name: impl Into<String>,
        positives: Vec<Frame>,
        negatives: Vec<Frame>,
    ) -> WitnessSet {
        WitnessSet {
            name: name.into(),
            property: None,
            positives,
            negatives,
            recommended_var_bound: 1,
        }
    }

    pub fn frames(&self) -> impl Iterator<Item = &Frame> {
        self.positives.iter().chain(&self.negatives)
    }
}

fn path(len: usize) -> Frame {
    Frame::from_edges(len + 1, (0..len).map(|i| (i, i + 1)))
}

/// Root below a reflexive point.
fn chain_to_loop() -> Frame {
    Frame::from_edges(2, [(0, 1), (1, 1)])
}

fn loop1() -> Frame {
    Frame::from_edges(1, [(0, 0)])
}

/// Appends a path of `len` fresh states starting at `from`; returns its end.
fn grow(f: &mut Frame, from: usize, len: usize) -> usize {
    let mut at = from;
    for _ in 0..len {
        let next = f.add_state();
        f.add_edge(at, next);
        at = next;
    }
    at
}

/// Root with a reflexive left successor and a vertical path of `len` steps.
fn dense_small(len: usize) -> Frame {
    let mut f = Frame::from_edges(2, [(0, 1), (1, 1)]);
    grow(&mut f, 0, len);
    f
}

/// Case 0 < m < n.
fn density_witnesses(m: usize, n: usize) -> (Vec<Frame>, Vec<Frame>) {
    // 0 root, 1 left loop, vertical path a_1..a_m, top loop above a_m
    let mut b = Frame::from_edges(2, [(0, 1), (1, 1)]);
    let am = grow(&mut b, 0, m);
    let top = grow(&mut b, am, 1);
    b.add_edge(top, top);

    let mut a1 = b.clone();
    let mut at = 0;
    for _ in 1..n {
        let c = a1.add_state();
        a1.add_edge(at, c);
        a1.add_edge(c, c);
        at = c;
    }
    a1.add_edge(at, am);

    let mut positives = vec![a1.named("A1")];
    for i in 2..=m + 1 {
        positives.push(dense_small(i - 2).named(format!("A{i}")));
    }
    (positives, vec![b.named("B")])
}

/// Case 0 < n < m.
fn transitivity_witnesses(m: usize, n: usize) -> (Vec<Frame>, Vec<Frame>) {
    let mut b = Frame::new(1);
    grow(&mut b, 0, m);
    grow(&mut b, 0, n);

    let mut a1 = Frame::new(1);
    let t = grow(&mut a1, 0, m);
    let mut at = 0;
    for j in 0..n {
        grow(&mut a1, at, n - j);
        if j + 1 == n {
            a1.add_edge(at, t);
        } else {
            at = grow(&mut a1, at, 1);
        }
    }

    let mut positives = vec![a1.named("A1")];
    for i in 2..=m + 1 {
        let mut f = Frame::new(1);
        grow(&mut f, 0, i - 2);
        grow(&mut f, 0, n);
        positives.push(f.named(format!("A{i}")));
    }
    (positives, vec![b.named("B")])
}

/// Case m = 0: n-reflexivity.
fn reflexivity_witnesses(n: usize) -> (Vec<Frame>, Vec<Frame>) {
    let mut a2 = Frame::new(n + 1);
    let sink = n;
    a2.add_edge(sink, sink);
    for i in 0..n {
        a2.add_edge(i, (i + 1) % n);
        a2.add_edge(i, sink);
    }
    (
        vec![loop1().named("A1"), a2.named("A2")],
        vec![chain_to_loop().named("B")],
    )
}

/// Case n = 0: m-recurrence.
fn recurrence_witnesses(m: usize) -> (Vec<Frame>, Vec<Frame>) {
    let mut positives = vec![loop1().named("A1")];
    for i in 2..=m + 1 {
        positives.push(path(i - 2).named(format!("A{i}")));
    }
    (positives, vec![chain_to_loop().named("B")])
}

/// Witness frames for the `(m,n)`-transfer property.
pub fn transfer_witnesses(m: usize, n: usize) -> Result<WitnessSet> {
    if m == n {
        return Err(invalid(format!("transfer({m},{n}) needs m != n")));
    }
    let (positives, negatives) = if m == 0 {
        reflexivity_witnesses(n)
    } else if n == 0 {
        recurrence_witnesses(m)
    } else if m < n {
        density_witnesses(m, n)
    } else {
        transitivity_witnesses(m, n)
    };
    Ok(WitnessSet::asserted(
        format!("transfer-{m}-{n}"),
        FrameProperty::Transfer { m, n },
        positives,
        negatives,
    ))
}

pub fn s4_witnesses() -> WitnessSet {
    let a1 = Frame::from_edges(
        4,
        [
            (0, 0),
            (1, 1),
            (2, 2),
            (3, 3),
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
        ],
    );
    let a2 = Frame::from_edges(2, [(0, 0), (1, 1), (0, 1)]);
    let a3 = Frame::from_edges(3, [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2)]);
    let b1 = Frame::from_edges(4, [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 2), (0, 3)]);
    let b2 = chain_to_loop();
    WitnessSet::asserted(
        "s4",
        FrameProperty::ReflexiveTransitive,
        vec![a1.named("A1"), a2.named("A2"), a3.named("A3")],
        vec![b1.named("B1"), b2.named("B2")],
    )
}

/// Transitively closed irreflexive tree with one branch of each length `1..=depth`.
pub fn branching_tree(depth: usize) -> Frame {
    let mut f = Frame::new(1);
    for len in 1..=depth {
        let mut branch = vec![0];
        for _ in 0..len {
            let s = f.add_state();
            for &earlier in &branch {
                f.add_edge(earlier, s);
            }
            branch.push(s);
        }
    }
    f
}

/// Löb witnesses with the infinite tree truncated at `truncation_depth`.
pub fn lob_witnesses(truncation_depth: usize) -> Result<WitnessSet> {
    if truncation_depth < 2 {
        return Err(invalid("truncation depth must be at least 2"));
    }
    let (mut positives, negatives) = transitivity_witnesses(2, 1);
    positives.push(branching_tree(truncation_depth).named("A4"));
    let mut negatives = negatives;
    negatives.push(Frame::from_edges(2, [(0, 0), (0, 1)]).named("B1"));
    Ok(WitnessSet::asserted(
        format!("lob-{truncation_depth}"),
        FrameProperty::TransitiveCWF,
        positives,
        negatives,
    ))
}

pub fn symmetry_witnesses() -> WitnessSet {
    WitnessSet::asserted(
        "symmetry",
        FrameProperty::Symmetric,
        vec![
            loop1().named("A1"),
            Frame::new(1).named("A2"),
            Frame::from_edges(2, [(0, 1), (1, 0), (1, 1)]).named("A3"),
        ],
        vec![chain_to_loop().named("B")],
    )
}

/// Built-in witness set by name: `transfer-M-N`, `s4`, `lob-D`, `symmetry`.
pub fn builtin_witnesses(name: &str) -> Result<WitnessSet> {
    if name == "s4" {
        return Ok(s4_witnesses());
    }
    if name == "symmetry" {
        return Ok(symmetry_witnesses());
    }
    if let Some(d) = name.strip_prefix("lob-") {
        let d = d
            .parse()
            .map_err(|_| invalid(format!("bad depth in {name}")))?;
        return lob_witnesses(d);
    }
    if let Some(rest) = name.strip_prefix("transfer-") {
        if let Some((m, n)) = rest.split_once('-') {
            if let (Ok(m), Ok(n)) = (m.parse(), n.parse()) {
                return transfer_witnesses(m, n);
            }
        }
    }
    Err(invalid(format!("unknown witness set {name}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::frame_valid;

    #[test]
    fn transfer_on_loop_and_chain() {
        let t01 = FrameProperty::Transfer { m: 0, n: 1 };
        assert!(check_property(&loop1(), t01));
        assert!(!check_property(&chain_to_loop(), t01));
    }

    #[test]
    fn figure_shapes_are_pinned() {
        let w = transfer_witnesses(2, 1).unwrap();
        let a1 = &w.positives[0];
        assert_eq!((a1.state_count(), a1.edge_count()), (4, 4));
        assert_eq!(w.positives.len(), 3);
        let b = &w.negatives[0];
        assert_eq!((b.state_count(), b.edge_count()), (4, 3));
        assert!(!check_property(b, FrameProperty::Transfer { m: 2, n: 1 }));

        let w = transfer_witnesses(1, 2).unwrap();
        // root, left loop, a1, top, one right-path node
        assert_eq!(w.positives[0].state_count(), 5);
        assert_eq!(w.positives[0].edge_count(), 8);

        let w = transfer_witnesses(0, 3).unwrap();
        assert_eq!(w.positives[1].state_count(), 4);
        assert_eq!(w.positives[1].edge_count(), 7);

        assert_eq!(branching_tree(3).state_count(), 7);
        // a closed branch of length l has l(l+1)/2 edges
        assert_eq!(branching_tree(3).edge_count(), 10);
    }

    #[test]
    fn witness_sets_respect_their_properties() {
        for m in 0..=3 {
            for n in 0..=3 {
                if m != n {
                    transfer_witnesses(m, n).unwrap();
                }
            }
        }
        s4_witnesses();
        symmetry_witnesses();
        lob_witnesses(4).unwrap();
        assert!(transfer_witnesses(2, 2).is_err());
    }

    #[test]
    fn lob_negatives_fail_cwf() {
        let w = lob_witnesses(4).unwrap();
        for g in &w.negatives {
            assert!(!check_property(g, FrameProperty::TransitiveCWF));
        }
        assert!(!check_property(
            &w.negatives[1],
            FrameProperty::ConverseWellFounded
        ));
    }

    #[test]
    fn axioms_have_expected_shape() {
        let t = axiom(FrameProperty::Transfer { m: 2, n: 1 }).unwrap();
        assert_eq!(t.to_string(), "([] [] ~p1 | <> p1)");
        assert_eq!(t.len(), 6);
        assert_eq!(axiom(FrameProperty::Symmetric).unwrap().len(), 5);
        assert_eq!(axiom(FrameProperty::TransitiveCWF).unwrap().len(), 8);
        assert_eq!(axiom(FrameProperty::ReflexiveTransitive).unwrap().len(), 8);
    }

    #[test]
    fn axioms_separate_their_witnesses() {
        let mut sets = vec![
            s4_witnesses(),
            symmetry_witnesses(),
            lob_witnesses(3).unwrap(),
        ];
        for (m, n) in [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)] {
            sets.push(transfer_witnesses(m, n).unwrap());
        }
        for w in sets {
            let ax = axiom(w.property.unwrap()).unwrap();
            for f in &w.positives {
                assert!(frame_valid(f, &ax).unwrap(), "{} {}", w.name, f.name);
            }
            for g in &w.negatives {
                assert!(!frame_valid(g, &ax).unwrap(), "{} {}", w.name, g.name);
            }
        }
    }

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(
            builtin_witnesses("transfer-2-1").unwrap().name,
            "transfer-2-1"
        );
        assert_eq!(builtin_witnesses("lob-3").unwrap().positives.len(), 4);
        assert!(builtin_witnesses("nope").is_err());
    }
}
