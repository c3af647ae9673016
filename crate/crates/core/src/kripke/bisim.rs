//! Coarsest stable partitions and bisimilarity of pointed models.
//!
//! Refinement starts from the partition induced by atom agreement and splits
//! blocks by the set of blocks their successors reach, until nothing changes.
//! With scopes supplied, states are additionally split by the set of blocks
//! present in their scope (their model), which yields bisimilarity for the
//! language with universal modalities.

use rustc_hash::FxHashMap;

use super::PointedModel;
use crate::formula::Language;

/// Block assignment of a coarsest stable partition. Block ids are numbered in
/// order of first appearance by state index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub block_of: Vec<u32>,
    pub blocks: usize,
}

impl Partition {
    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }
}

/// Computes the coarsest partition of `0..n` that refines atom agreement and
/// is stable under `succ` (and under `scope_of`, when given).
///
/// `succ(i, out)` must push the successors of `i` into `out`.
pub fn refine_partition(
    n: usize,
    atoms: impl Fn(usize) -> u64,
    succ: impl Fn(usize, &mut Vec<u32>),
    scope_of: Option<&[u32]>,
) -> Partition {
    let mut block = Vec::with_capacity(n);
    let mut ids: FxHashMap<u64, u32> = FxHashMap::default();
    for i in 0..n {
        let next = ids.len() as u32;
        block.push(*ids.entry(atoms(i)).or_insert(next));
    }
    let mut count = ids.len();

    let scope_members: Option<Vec<Vec<u32>>> = scope_of.map(|sc| {
        let scopes = sc.iter().map(|&s| s as usize + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); scopes];
        for (i, &s) in sc.iter().enumerate() {
            members[s as usize].push(i as u32);
        }
        members
    });

    let mut buf = Vec::new();
    loop {
        // block-set signature of each scope
        let scope_sig: Vec<u32> = match &scope_members {
            None => Vec::new(),
            Some(members) => {
                let mut table: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
                members
                    .iter()
                    .map(|ms| {
                        let mut set: Vec<u32> = ms.iter().map(|&m| block[m as usize]).collect();
                        set.sort_unstable();
                        set.dedup();
                        let next = table.len() as u32;
                        *table.entry(set).or_insert(next)
                    })
                    .collect()
            }
        };

        let mut table: FxHashMap<(u32, u32, Vec<u32>), u32> = FxHashMap::default();
        let mut next_block = Vec::with_capacity(n);
        for i in 0..n {
            buf.clear();
            succ(i, &mut buf);
            for b in buf.iter_mut() {
                *b = block[*b as usize];
            }
            buf.sort_unstable();
            buf.dedup();
            let sc = match scope_of {
                Some(sc) => scope_sig[sc[i] as usize],
                None => 0,
            };
            let next = table.len() as u32;
            let id = *table.entry((block[i], sc, buf.clone())).or_insert(next);
            next_block.push(id);
        }
        let new_count = table.len();
        block = next_block;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    Partition {
        block_of: block,
        blocks: count,
    }
}

/// Bisimilarity of two pointed models with atoms compared on every variable.
pub fn bisimilar(a: &PointedModel, b: &PointedModel, lang: Language) -> bool {
    bisimilar_on(a, b, lang, !0)
}

/// Bisimilarity of two pointed models, comparing atoms only on `var_mask`.
///
/// For the global language the coarsest bisimulation between the two models
/// must additionally be total in both directions.
pub fn bisimilar_on(a: &PointedModel, b: &PointedModel, lang: Language, var_mask: u64) -> bool {
    let na = a.model.state_count();
    let nb = b.model.state_count();
    let part = refine_partition(
        na + nb,
        |i| {
            if i < na {
                a.model.label(i) & var_mask
            } else {
                b.model.label(i - na) & var_mask
            }
        },
        |i, out| {
            if i < na {
                out.extend_from_slice(a.model.frame.successors(i));
            } else {
                out.extend(
                    b.model
                        .frame
                        .successors(i - na)
                        .iter()
                        .map(|&t| t + na as u32),
                );
            }
        },
        None,
    );
    if !part.same_block(a.point, na + b.point) {
        return false;
    }
    match lang {
        Language::Basic => true,
        Language::Global => {
            let mut in_a = vec![false; part.blocks];
            let mut in_b = vec![false; part.blocks];
            for i in 0..na {
                in_a[part.block_of[i] as usize] = true;
            }
            for j in 0..nb {
                in_b[part.block_of[na + j] as usize] = true;
            }
            in_a == in_b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{Frame, Model};

    fn pm(n: usize, edges: &[(usize, usize)], labels: Vec<u64>, point: usize) -> PointedModel {
        Model::from_labels(Frame::from_edges(n, edges.iter().copied()), labels)
            .unwrap()
            .pointed(point)
    }

    #[test]
    fn identical_models_are_bisimilar() {
        let a = pm(3, &[(0, 1), (1, 2), (2, 0)], vec![1, 0, 1], 0);
        assert!(bisimilar(&a, &a.clone(), Language::Basic));
        assert!(bisimilar(&a, &a.clone(), Language::Global));
    }

    #[test]
    fn loop_is_bisimilar_to_two_cycle_with_same_labels() {
        let a = pm(1, &[(0, 0)], vec![1], 0);
        let b = pm(2, &[(0, 1), (1, 0)], vec![1, 1], 1);
        assert!(bisimilar(&a, &b, Language::Basic));
        let c = pm(2, &[(0, 1), (1, 0)], vec![1, 0], 0);
        assert!(!bisimilar(&a, &c, Language::Basic));
    }

    #[test]
    fn unreachable_parts_matter_only_globally() {
        let a = pm(1, &[], vec![0], 0);
        let b = pm(2, &[], vec![0, 1], 0);
        assert!(bisimilar(&a, &b, Language::Basic));
        assert!(!bisimilar(&a, &b, Language::Global));
    }

    #[test]
    fn var_mask_restricts_atom_comparison() {
        let a = pm(1, &[], vec![0b01], 0);
        let b = pm(1, &[], vec![0b11], 0);
        assert!(!bisimilar(&a, &b, Language::Basic));
        assert!(bisimilar_on(&a, &b, Language::Basic, 0b01));
    }

    #[test]
    fn scope_refinement_splits_by_present_blocks() {
        // states 0,1 in scope 0; state 2 in scope 1; all share atoms
        let part = refine_partition(
            3,
            |i| if i == 1 { 1 } else { 0 },
            |_, _| {},
            Some(&[0, 0, 1]),
        );
        assert!(!part.same_block(0, 2));
        let plain = refine_partition(3, |i| if i == 1 { 1 } else { 0 }, |_, _| {}, None);
        assert!(plain.same_block(0, 2));
    }
}
