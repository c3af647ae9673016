//! Indexed finite sets of pointed models with precomputed successor and
//! same-model structure.
//!
//! A universe is built from *sources*: explicit models, or frames expanded
//! over every valuation of the first `vars` variables. Every point of every
//! source model is a node. Without quotienting each node is one universe
//! index; a quotiented universe has one index per bisimulation class of nodes,
//! which preserves the denotation of every formula of the chosen language.

use super::{refine_partition, Frame, Model, PointedModel};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::formula::Language;

/// Default cap on the number of nodes (pointed models) a universe may expand to.
pub const DEFAULT_NODE_CAP: u64 = 1 << 22;

#[derive(Clone, Debug)]
enum Source {
    Model(Model),
    Frame { frame: Frame, vars: usize },
}

impl Source {
    fn frame(&self) -> &Frame {
        match self {
            Source::Model(m) => &m.frame,
            Source::Frame { frame, .. } => frame,
        }
    }

    fn valuations(&self) -> u64 {
        match self {
            Source::Model(_) => 1,
            Source::Frame { frame, vars } => 1u64 << (frame.state_count() * vars),
        }
    }

    fn label(&self, valuation: u64, state: usize) -> u64 {
        match self {
            Source::Model(m) => m.label(state),
            Source::Frame { frame, vars } => {
                let n = frame.state_count();
                (0..*vars).fold(0, |acc, vi| acc | (valuation >> (vi * n + state) & 1) << vi)
            }
        }
    }

    fn model(&self, valuation: u64) -> Model {
        match self {
            Source::Model(m) => m.clone(),
            Source::Frame { frame, .. } => {
                let labels = (0..frame.state_count())
                    .map(|s| self.label(valuation, s))
                    .collect();
                Model::from_labels(frame.clone(), labels).expect("label count matches")
            }
        }
    }
}

/// Where a universe index comes from: the source, the valuation code (always
/// 0 for explicit models) and the point. For a quotiented universe this is
/// the first node of the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Origin {
    pub source: usize,
    pub valuation: u64,
    pub point: usize,
}

#[derive(Clone, Debug)]
pub struct Universe {
    sources: Vec<Source>,
    bases: Vec<u64>,
    node_index: Vec<u32>,
    origins: Vec<Origin>,
    atoms: Vec<u64>,
    succ_off: Vec<u32>,
    succ: Vec<u32>,
    scope_of: Vec<u32>,
    scopes: Vec<Vec<u32>>,
    global: bool,
    quotient: Option<Language>,
}

/// Node numbering over the sources, before any quotienting.
struct Nodes<'a> {
    sources: &'a [Source],
    bases: Vec<u64>,
    total: u64,
}

impl<'a> Nodes<'a> {
    fn new(sources: &'a [Source], cap: u64) -> Result<Nodes<'a>> {
        let mut bases = Vec::with_capacity(sources.len());
        let mut total: u64 = 0;
        for s in sources {
            bases.push(total);
            let n = s.frame().state_count() as u64;
            let vals = match s {
                Source::Frame { frame, vars } if frame.state_count() * vars >= 40 => {
                    return Err(Error::Resource {
                        what: "universe nodes",
                        needed: u64::MAX,
                        cap,
                    })
                }
                _ => s.valuations(),
            };
            total = total.saturating_add(vals.saturating_mul(n));
        }
        if total > cap {
            return Err(Error::Resource {
                what: "universe nodes",
                needed: total,
                cap,
            });
        }
        Ok(Nodes {
            sources,
            bases,
            total,
        })
    }

    fn decode(&self, node: u64) -> Origin {
        let source = match self.bases.binary_search(&node) {
            Ok(mut i) => {
                // skip sources that contribute no nodes
                while i + 1 < self.bases.len() && self.bases[i + 1] == node {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        let n = self.sources[source].frame().state_count() as u64;
        let local = node - self.bases[source];
        Origin {
            source,
            valuation: local / n,
            point: (local % n) as usize,
        }
    }

    fn encode(&self, o: Origin) -> u64 {
        let n = self.sources[o.source].frame().state_count() as u64;
        self.bases[o.source] + o.valuation * n + o.point as u64
    }

    fn atoms(&self, node: u64) -> u64 {
        let o = self.decode(node);
        self.sources[o.source].label(o.valuation, o.point)
    }

    fn successors(&self, node: u64, out: &mut Vec<u32>) {
        let o = self.decode(node);
        let base = self.encode(Origin { point: 0, ..o });
        out.extend(
            self.sources[o.source]
                .frame()
                .successors(o.point)
                .iter()
                .map(|&t| (base + t as u64) as u32),
        );
    }

    /// Scope (model) id of every node: one scope per (source, valuation).
    fn scope_ids(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.total as usize);
        let mut scope = 0u32;
        for s in self.sources {
            let n = s.frame().state_count();
            for _ in 0..s.valuations() {
                out.extend(std::iter::repeat_n(scope, n));
                scope += 1;
            }
        }
        out
    }
}

impl Universe {
    /// Every point of every given model, one index each, in source order.
    pub fn from_models(models: Vec<Model>) -> Universe {
        let sources = models.into_iter().map(Source::Model).collect();
        Universe::build(sources, None, u64::MAX).expect("explicit models are uncapped")
    }

    /// All valuations of the variables `p1..p<vars>` over every frame, all
    /// points, one index each.
    pub fn expand(frames: Vec<Frame>, vars: usize, node_cap: u64) -> Result<Universe> {
        let sources = frames
            .into_iter()
            .map(|frame| Source::Frame { frame, vars })
            .collect();
        Universe::build(sources, None, node_cap)
    }

    /// Like [`Universe::expand`], but with one index per class of nodes
    /// that are bisimilar for `lang`.
    pub fn expand_quotient(
        frames: Vec<Frame>,
        vars: usize,
        lang: Language,
        node_cap: u64,
    ) -> Result<Universe> {
        let sources = frames
            .into_iter()
            .map(|frame| Source::Frame { frame, vars })
            .collect();
        Universe::build(sources, Some(lang), node_cap)
    }

    /// Quotient of an explicit-model universe by bisimilarity for `lang`.
    pub fn quotient_models(models: Vec<Model>, lang: Language) -> Universe {
        let sources = models.into_iter().map(Source::Model).collect();
        Universe::build(sources, Some(lang), u64::MAX).expect("explicit models are uncapped")
    }

    fn build(sources: Vec<Source>, quotient: Option<Language>, cap: u64) -> Result<Universe> {
        let nodes = Nodes::new(&sources, cap)?;
        let total = nodes.total as usize;
        let node_scope = nodes.scope_ids();
        let (node_index, count) = match quotient {
            None => ((0..total as u32).collect::<Vec<_>>(), total),
            Some(lang) => {
                let part = refine_partition(
                    total,
                    |i| nodes.atoms(i as u64),
                    |i, out| nodes.successors(i as u64, out),
                    lang.allows_global().then_some(node_scope.as_slice()),
                );
                (part.block_of, part.blocks)
            }
        };

        // representative node of each index
        let mut rep = vec![u32::MAX; count];
        for (node, &idx) in node_index.iter().enumerate() {
            if rep[idx as usize] == u32::MAX {
                rep[idx as usize] = node as u32;
            }
        }

        let mut origins = Vec::with_capacity(count);
        let mut atoms = Vec::with_capacity(count);
        let mut succ_off = Vec::with_capacity(count + 1);
        let mut succ = Vec::new();
        let mut buf = Vec::new();
        succ_off.push(0);
        for &r in &rep {
            origins.push(nodes.decode(r as u64));
            atoms.push(nodes.atoms(r as u64));
            buf.clear();
            nodes.successors(r as u64, &mut buf);
            let mut targets: Vec<u32> = buf.iter().map(|&t| node_index[t as usize]).collect();
            targets.sort_unstable();
            targets.dedup();
            succ.extend(targets);
            succ_off.push(succ.len() as u32);
        }

        let global = quotient.is_none_or(|l| l.allows_global());
        let (scope_of, scopes) = if global {
            // a scope is the set of indices present in one source model
            let mut table: rustc_hash::FxHashMap<Vec<u32>, u32> = Default::default();
            let mut scopes: Vec<Vec<u32>> = Vec::new();
            let mut node_scope_set: Vec<u32> = Vec::new();
            let mut start = 0usize;
            while start < total {
                let sc = node_scope[start];
                let mut end = start;
                while end < total && node_scope[end] == sc {
                    end += 1;
                }
                let mut set: Vec<u32> = node_index[start..end].to_vec();
                set.sort_unstable();
                set.dedup();
                let next = table.len() as u32;
                let id = *table.entry(set.clone()).or_insert_with(|| {
                    scopes.push(set);
                    next
                });
                node_scope_set.push(id);
                start = end;
            }
            let mut scope_of = vec![0u32; count];
            for (i, &r) in rep.iter().enumerate() {
                scope_of[i] = node_scope_set[node_scope[r as usize] as usize];
            }
            (scope_of, scopes)
        } else {
            (vec![0; count], Vec::new())
        };

        let bases = nodes.bases.clone();
        Ok(Universe {
            sources,
            bases,
            node_index,
            origins,
            atoms,
            succ_off,
            succ,
            scope_of,
            scopes,
            global,
            quotient,
        })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Number of underlying pointed models before quotienting.
    pub fn node_count(&self) -> usize {
        self.node_index.len()
    }

    pub fn is_quotient(&self) -> Option<Language> {
        self.quotient
    }

    /// Whether same-model structure is available (needed for `E` and `A`).
    pub fn supports_global(&self) -> bool {
        self.global
    }

    pub fn atoms(&self, i: usize) -> u64 {
        self.atoms[i]
    }

    pub fn successors(&self, i: usize) -> &[u32] {
        &self.succ[self.succ_off[i] as usize..self.succ_off[i + 1] as usize]
    }

    /// Indices over the same model as `i`, `i` included.
    pub fn same_model(&self, i: usize) -> &[u32] {
        assert!(
            self.global,
            "universe was quotiented without same-model structure"
        );
        &self.scopes[self.scope_of[i] as usize]
    }

    pub fn scope_id(&self, i: usize) -> usize {
        self.scope_of[i] as usize
    }

    pub fn scope_count(&self) -> usize {
        self.scopes.len()
    }

    pub fn scope_members(&self, scope: usize) -> &[u32] {
        &self.scopes[scope]
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    pub fn source_frame(&self, source: usize) -> &Frame {
        self.sources[source].frame()
    }

    pub fn origin(&self, i: usize) -> Origin {
        self.origins[i]
    }

    /// The (representative) pointed model behind index `i`.
    pub fn pointed_model(&self, i: usize) -> PointedModel {
        let o = self.origins[i];
        PointedModel::new(self.sources[o.source].model(o.valuation), o.point)
    }

    /// Universe index of a node given by source, valuation code and point.
    pub fn index_of(&self, source: usize, valuation: u64, point: usize) -> usize {
        let n = self.sources[source].frame().state_count() as u64;
        let node = self.bases[source] + valuation * n + point as u64;
        self.node_index[node as usize] as usize
    }

    /// Indices carrying at least one pointed model over `source`.
    pub fn source_indices(&self, source: usize) -> BitSet {
        let start = self.bases[source] as usize;
        let end = self
            .bases
            .get(source + 1)
            .map(|&b| b as usize)
            .unwrap_or(self.node_index.len());
        BitSet::from_indices(
            self.len(),
            self.node_index[start..end].iter().map(|&i| i as usize),
        )
    }

    pub fn empty_set(&self) -> BitSet {
        BitSet::new(self.len())
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn set_of(&self, indices: impl IntoIterator<Item = usize>) -> BitSet {
        BitSet::from_indices(self.len(), indices)
    }
}
