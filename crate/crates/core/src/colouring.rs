//! Non-colourability: the formulas φₙ, complete graphs Kₙ and K̂ₙ, a
//! backtracking colouring oracle and the pointed models of the colouring game.

use crate::bits::BitSet;
use crate::error::{invalid, Result};
use crate::formula::Formula;
use crate::kripke::{frame_valid, Frame, Model, Universe};

/// `⌈log₂ n⌉`, with `k(1) = 0`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// The `i`-th subset (0-based) of `{p1..pk}` in binary order, as an
/// elementary conjunction: bit `b` of `i` decides the polarity of `p(b+1)`.
pub fn elementary_conjunction(i: usize, k: usize) -> Formula {
    Formula::big_and(
        (0..k)
            .map(|b| {
                let v = b as u32 + 1;
                if i >> b & 1 == 1 {
                    Formula::pos(v)
                } else {
                    Formula::neg(v)
                }
            })
            .collect(),
    )
}

/// The formula valid exactly on the frames that are not `n`-colourable.
pub fn phi_n(n: usize) -> Formula {
    assert!(n >= 1, "phi_n needs n >= 1");
    if n == 1 {
        return Formula::exists(Formula::dia(Formula::Top));
    }
    let k = ceil_log2(n);
    let mut parts: Vec<Formula> = (0..n)
        .map(|i| {
            let s = elementary_conjunction(i, k);
            Formula::and(s.clone(), Formula::dia(s))
        })
        .collect();
    parts.extend((n..1 << k).map(|j| elementary_conjunction(j, k)));
    Formula::exists(Formula::big_or(parts))
}

/// The complete irreflexive graph on `n` vertices.
pub fn k_complete(n: usize) -> Frame {
    Frame::from_edges(
        n,
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))),
    )
    .named(format!("k{n}"))
}

/// Two copies of Kₙ; states `0..n` form the irreflexive component, `n..2n`
/// the reflexive one, whose first state carries the only loop.
pub fn khat(n: usize) -> Frame {
    let k = k_complete(n);
    let mut f = k.disjoint_union(&k);
    f.add_edge(n, n);
    f.named(format!("khat{n}"))
}

/// The cycle `0 -> 1 -> ... -> len-1 -> 0`.
pub fn cycle(len: usize) -> Frame {
    Frame::from_edges(len, (0..len).map(|i| (i, (i + 1) % len))).named(format!("c{len}"))
}

/// Colour of each state, in `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourAssignment(pub Vec<usize>);

impl ColourAssignment {
    pub fn is_proper(&self, f: &Frame) -> bool {
        self.0.len() == f.state_count() && f.edges().all(|(u, v)| self.0[u] != self.0[v])
    }
}

/// A proper colouring with at most `n` colours, if one exists. Edge direction
/// is ignored and a loop makes the frame uncolourable.
pub fn colour(f: &Frame, n: usize) -> Option<ColourAssignment> {
    assert!(n >= 1);
    let size = f.state_count();
    let mut adj = vec![Vec::new(); size];
    for (u, v) in f.edges() {
        if u == v {
            return None;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut colours = vec![usize::MAX; size];

    fn place(at: usize, n: usize, adj: &[Vec<usize>], colours: &mut [usize]) -> bool {
        if at == colours.len() {
            return true;
        }
        // a fresh colour is interchangeable with any other unused one
        let used = colours[..at].iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..n.min(used + 1) {
            if adj[at].iter().all(|&v| colours[v] != c) {
                colours[at] = c;
                if place(at + 1, n, adj, colours) {
                    return true;
                }
            }
        }
        colours[at] = usize::MAX;
        false
    }

    place(0, n, &adj, &mut colours).then_some(ColourAssignment(colours))
}

pub fn is_n_colourable(f: &Frame, n: usize) -> bool {
    colour(f, n).is_some()
}

/// Whether frame validity of φₙ agrees with non-colourability on `f`.
pub fn noncol_equivalence(f: &Frame, n: usize) -> Result<bool> {
    Ok(frame_valid(f, &phi_n(n))? == !is_n_colourable(f, n))
}

/// The position of the colouring game: Hydra's pointed models over K̂ₙ on
/// the left, Hercules' pointed model over Kₙ on the right.
///
/// Sources `0..n` of the universe are the models `A_w` (source `w`), source
/// `n` is Hercules' model.
#[derive(Clone, Debug)]
pub struct NoncolSetup {
    pub n: usize,
    pub universe: Universe,
    pub left: BitSet,
    pub right: BitSet,
}

impl NoncolSetup {
    /// The left model identity `w` of an index, or `None` on the right.
    pub fn left_model(&self, i: usize) -> Option<usize> {
        let s = self.universe.origin(i).source;
        (s < self.n).then_some(s)
    }
}

/// Builds the colouring-game position for Hercules' model over Kₙ, whose
/// points must carry pairwise distinct valuations.
pub fn noncol_game_setup(n: usize, hercules: &Model, point: usize) -> Result<NoncolSetup> {
    if hercules.frame.state_count() != n || hercules.frame.edges().ne(k_complete(n).edges()) {
        return Err(invalid(format!("Hercules' model must be over k{n}")));
    }
    if point >= n {
        return Err(invalid(format!("point {point} out of range")));
    }
    let mut labels = hercules.labels().to_vec();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() != n {
        return Err(invalid(
            "Hercules' points need pairwise distinct valuations",
        ));
    }

    let s = 0;
    let transposition = |w: usize, u: usize| {
        if u == s {
            w
        } else if u == w {
            s
        } else {
            u
        }
    };
    let frame = khat(n);
    let mut models: Vec<Model> = (0..n)
        .map(|w| {
            let labels = (0..2 * n)
                .map(|state| hercules.label(transposition(w, state % n)))
                .collect();
            Model::from_labels(frame.clone(), labels).expect("2n labels")
        })
        .collect();
    models.push(hercules.clone());
    let universe = Universe::from_models(models);

    let left = universe.set_of((0..n).map(|w| universe.index_of(w, 0, transposition(w, point))));
    let right = universe.set_of([universe.index_of(n, 0, point)]);
    Ok(NoncolSetup {
        n,
        universe,
        left,
        right,
    })
}

/// Hercules' canonical model over Kₙ: vertex `v` satisfies the variables of
/// the binary digits of `v`.
pub fn binary_hercules_model(n: usize) -> Model {
    Model::from_labels(k_complete(n), (0..n as u64).collect()).expect("n labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, MeasureKind};

    fn all_assignments_colourable(f: &Frame, n: usize) -> bool {
        let size = f.state_count();
        let total = n.pow(size as u32);
        (0..total).any(|code| {
            let colours: Vec<usize> = (0..size).map(|i| code / n.pow(i as u32) % n).collect();
            ColourAssignment(colours).is_proper(f)
        })
    }

    #[test]
    fn phi_small_cases() {
        assert_eq!(phi_n(1), parse("E <> T").unwrap());
        assert_eq!(
            phi_n(2),
            parse("E ((~p1 & <> ~p1) | (p1 & <> p1))").unwrap()
        );
        let p3 = phi_n(3);
        assert_eq!(p3.measure(MeasureKind::VarCount), 2);
    }

    #[test]
    fn var_count_is_ceil_log() {
        for n in 2..=16 {
            assert_eq!(phi_n(n).vars().len(), ceil_log2(n), "n={n}");
        }
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }

    #[test]
    fn complete_graph_counts() {
        assert_eq!(k_complete(3).edge_count(), 6);
        let k = khat(3);
        assert_eq!((k.state_count(), k.edge_count()), (6, 13));
        for n in 1..=8 {
            assert_eq!(khat(n).reflexive_states().len(), 1);
        }
    }

    #[test]
    fn colouring_examples() {
        assert!(is_n_colourable(&k_complete(3), 3));
        assert!(!is_n_colourable(&k_complete(3), 2));
        for n in 2..=5 {
            assert!(!is_n_colourable(&khat(n), n));
        }
        assert!(is_n_colourable(&Frame::new(4), 1));
        assert!(!is_n_colourable(&cycle(5), 2));
        assert!(is_n_colourable(&cycle(6), 2));
    }

    #[test]
    fn colouring_agrees_with_exhaustive_assignment() {
        let frames = [
            k_complete(3),
            khat(2),
            cycle(5),
            cycle(4),
            Frame::from_edges(4, [(0, 1), (2, 3), (1, 2)]),
        ];
        for f in &frames {
            for n in 1..=3 {
                let found = colour(f, n);
                if let Some(c) = &found {
                    assert!(c.is_proper(f));
                }
                assert_eq!(found.is_some(), all_assignments_colourable(f, n));
            }
        }
    }

    #[test]
    fn encoding_on_named_graphs() {
        assert!(noncol_equivalence(&k_complete(3), 3).unwrap());
        assert!(noncol_equivalence(&khat(2), 2).unwrap());
        assert!(noncol_equivalence(&cycle(5), 2).unwrap());
        assert!(frame_valid(&khat(2), &phi_n(2)).unwrap());
        assert!(!frame_valid(&k_complete(3), &phi_n(3)).unwrap());
    }

    #[test]
    fn game_setup_shape() {
        let setup = noncol_game_setup(3, &binary_hercules_model(3), 0).unwrap();
        assert_eq!(setup.left.count(), 3);
        assert_eq!(setup.right.count(), 1);
        let hercules_label = setup.universe.atoms(setup.right.first().unwrap());
        for i in setup.left.iter() {
            assert_eq!(setup.universe.atoms(i), hercules_label);
            assert!(setup.left_model(i).is_some());
        }
        // the reflexive point of A_w carries w's valuation
        for w in 0..3 {
            let refl = setup.universe.index_of(w, 0, 3);
            assert_eq!(setup.universe.atoms(refl), w as u64);
        }
    }

    #[test]
    fn game_setup_rejects_repeated_valuations() {
        let m = Model::from_labels(k_complete(3), vec![0, 1, 1]).unwrap();
        assert!(noncol_game_setup(3, &m, 0).is_err());
        let wrong = Model::from_labels(Frame::new(3), vec![0, 1, 2]).unwrap();
        assert!(noncol_game_setup(3, &wrong, 0).is_err());
    }
}
