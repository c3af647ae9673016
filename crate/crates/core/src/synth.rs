//! Bottom-up formula enumeration over a universe, minimal separating formulas
//! and lower-bound certificates for witness sets.
//!
//! Formulas are generated by increasing length. Two formulas with the same
//! denotation are interchangeable inside any larger formula, so for every
//! denotation only the formulas whose measures are not dominated by another
//! formula with that denotation are retained.

use std::fmt;
use std::hash::Hasher;
use std::str::FromStr;
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHasher};

use crate::bits::BitSet;
use crate::error::{invalid, Error, Result};
use crate::formula::{Formula, Language, MeasureKind, MeasureVector, Symbol, Var};
use crate::gallery::WitnessSet;
use crate::kripke::{frame_valid_capped, Universe, DEFAULT_NODE_CAP};

/// Default cap on the number of retained formulas.
pub const DEFAULT_ENTRY_CAP: usize = 6_000_000;

/// Denotation of `f` over `u`, computed compositionally.
pub fn denotation(u: &Universe, f: &Formula) -> BitSet {
    match f {
        Formula::Top => u.full_set(),
        Formula::Bot => u.empty_set(),
        Formula::Pos(v) => u.set_of((0..u.len()).filter(|&i| u.atoms(i) & v.mask() != 0)),
        Formula::Neg(v) => u.set_of((0..u.len()).filter(|&i| u.atoms(i) & v.mask() == 0)),
        Formula::Or(a, b) => denotation(u, a).union(&denotation(u, b)),
        Formula::And(a, b) => denotation(u, a).intersection(&denotation(u, b)),
        Formula::Dia(a) => dia(u, &denotation(u, a)),
        Formula::Box(a) => boxed(u, &denotation(u, a)),
        Formula::Exists(a) => exists(u, &denotation(u, a)),
        Formula::Forall(a) => forall(u, &denotation(u, a)),
    }
}

pub fn dia(u: &Universe, d: &BitSet) -> BitSet {
    u.set_of((0..u.len()).filter(|&i| u.successors(i).iter().any(|&j| d.contains(j as usize))))
}

pub fn boxed(u: &Universe, d: &BitSet) -> BitSet {
    u.set_of((0..u.len()).filter(|&i| u.successors(i).iter().all(|&j| d.contains(j as usize))))
}

pub fn exists(u: &Universe, d: &BitSet) -> BitSet {
    let hit: Vec<bool> = (0..u.scope_count())
        .map(|s| u.scope_members(s).iter().any(|&j| d.contains(j as usize)))
        .collect();
    u.set_of((0..u.len()).filter(|&i| hit[u.scope_id(i)]))
}

pub fn forall(u: &Universe, d: &BitSet) -> BitSet {
    let all: Vec<bool> = (0..u.scope_count())
        .map(|s| u.scope_members(s).iter().all(|&j| d.contains(j as usize)))
        .collect();
    u.set_of((0..u.len()).filter(|&i| all[u.scope_id(i)]))
}

/// Which measures decide whether one formula may replace another with the
/// same denotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    /// Every measure (variables compared as sets).
    Full,
    /// Length and one other measure.
    Focus(MeasureKind),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Bot,
    Top,
    Pos(u32),
    Neg(u32),
    Or,
    And,
    Dia,
    Box,
    Exists,
    Forall,
}

#[derive(Clone, Copy, Debug)]
struct Measures {
    length: u32,
    depth: u32,
    vars: u64,
    counts: [u32; 8],
}

impl Measures {
    fn leaf(op: Op) -> Measures {
        let mut m = Measures {
            length: 1,
            depth: 0,
            vars: 0,
            counts: [0; 8],
        };
        match op {
            Op::Bot => m.counts[Symbol::Bot.slot()] = 1,
            Op::Top => m.counts[Symbol::Top.slot()] = 1,
            Op::Pos(v) | Op::Neg(v) => m.vars = Var::new(v).mask(),
            _ => unreachable!("not a leaf"),
        }
        m
    }

    fn unary(sym: Symbol, a: &Measures) -> Measures {
        let mut m = *a;
        m.length += 1;
        m.depth += 1;
        m.counts[sym.slot()] += 1;
        m
    }

    fn binary(sym: Symbol, a: &Measures, b: &Measures) -> Measures {
        let mut counts = [0; 8];
        for (k, c) in counts.iter_mut().enumerate() {
            *c = a.counts[k] + b.counts[k];
        }
        counts[sym.slot()] += 1;
        Measures {
            length: a.length + b.length + 1,
            depth: a.depth.max(b.depth),
            vars: a.vars | b.vars,
            counts,
        }
    }

    fn get(&self, kind: MeasureKind) -> u32 {
        match kind {
            MeasureKind::Length => self.length,
            MeasureKind::ModalDepth => self.depth,
            MeasureKind::VarCount => self.vars.count_ones(),
            MeasureKind::Count(s) => self.counts[s.slot()],
        }
    }

    fn vector(&self) -> MeasureVector {
        MeasureVector {
            length: self.length,
            depth: self.depth,
            vars: self.vars.count_ones(),
            counts: self.counts,
        }
    }

    fn dominates(&self, other: &Measures, mode: Dominance) -> bool {
        let subset = self.vars & !other.vars == 0;
        self.length <= other.length
            && match mode {
                Dominance::Full => {
                    self.depth <= other.depth
                        && subset
                        && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
                }
                Dominance::Focus(MeasureKind::Length) => true,
                Dominance::Focus(MeasureKind::VarCount) => subset,
                Dominance::Focus(k) => self.get(k) <= other.get(k),
            }
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    op: Op,
    a: u32,
    b: u32,
    den: u32,
    m: Measures,
}

/// Counters of one enumeration run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// Candidate formulas generated, before deduplication.
    pub generated: u64,
    /// Distinct denotations seen.
    pub denotations: u64,
    /// Formulas retained after deduplication.
    pub retained: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumConfig {
    pub var_bound: usize,
    pub length_cap: usize,
    pub language: Language,
    pub dominance: Dominance,
    pub entry_cap: usize,
}

impl EnumConfig {
    pub fn new(var_bound: usize, length_cap: usize, language: Language) -> EnumConfig {
        EnumConfig {
            var_bound,
            length_cap,
            language,
            dominance: Dominance::Full,
            entry_cap: DEFAULT_ENTRY_CAP,
        }
    }

    pub fn focus(mut self, kind: MeasureKind) -> EnumConfig {
        self.dominance = Dominance::Focus(kind);
        self
    }
}

/// Level-by-level enumeration state over one universe.
pub struct Enumerator<'u> {
    u: &'u Universe,
    cfg: EnumConfig,
    words: usize,
    dens: Vec<u64>,
    buckets: FxHashMap<u64, Vec<u32>>,
    fronts: Vec<Vec<u32>>,
    entries: Vec<Entry>,
    alive: Vec<bool>,
    levels: Vec<Vec<u32>>,
    stats: EnumStats,
    atom_dens: Vec<BitSet>,
}

fn hash_words(words: &[u64]) -> u64 {
    let mut h = FxHasher::default();
    for &w in words {
        h.write_u64(w);
    }
    h.finish()
}

impl<'u> Enumerator<'u> {
    pub fn new(u: &'u Universe, cfg: EnumConfig) -> Result<Enumerator<'u>> {
        if cfg.language.allows_global() && !u.supports_global() {
            return Err(invalid("universe lacks same-model structure for E/A"));
        }
        if cfg.var_bound > 63 {
            return Err(invalid("too many variables"));
        }
        let atom_dens = (1..=cfg.var_bound as u32)
            .map(|v| denotation(u, &Formula::pos(v)))
            .collect();
        Ok(Enumerator {
            u,
            cfg,
            words: u.len().div_ceil(64),
            dens: Vec::new(),
            buckets: FxHashMap::default(),
            fronts: Vec::new(),
            entries: Vec::new(),
            alive: Vec::new(),
            levels: vec![Vec::new()],
            stats: EnumStats::default(),
            atom_dens,
        })
    }

    pub fn stats(&self) -> EnumStats {
        self.stats
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    /// Largest length enumerated so far.
    pub fn length(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn den_words(&self, id: u32) -> &[u64] {
        let d = self.entries[id as usize].den as usize;
        &self.dens[d * self.words..(d + 1) * self.words]
    }

    pub fn denotation(&self, id: u32) -> BitSet {
        let mut b = BitSet::new(self.u.len());
        for i in 0..self.u.len() {
            if self.den_words(id)[i / 64] >> (i % 64) & 1 == 1 {
                b.insert(i);
            }
        }
        b
    }

    pub fn measures(&self, id: u32) -> MeasureVector {
        self.entries[id as usize].m.vector()
    }

    pub fn measure(&self, id: u32, kind: MeasureKind) -> u32 {
        self.entries[id as usize].m.get(kind)
    }

    pub fn formula(&self, id: u32) -> Formula {
        let e = &self.entries[id as usize];
        match e.op {
            Op::Bot => Formula::Bot,
            Op::Top => Formula::Top,
            Op::Pos(v) => Formula::pos(v),
            Op::Neg(v) => Formula::neg(v),
            Op::Or => Formula::or(self.formula(e.a), self.formula(e.b)),
            Op::And => Formula::and(self.formula(e.a), self.formula(e.b)),
            Op::Dia => Formula::dia(self.formula(e.a)),
            Op::Box => Formula::boxed(self.formula(e.a)),
            Op::Exists => Formula::exists(self.formula(e.a)),
            Op::Forall => Formula::forall(self.formula(e.a)),
        }
    }

    /// Retained formulas of exactly the given length.
    pub fn level(&self, length: usize) -> &[u32] {
        &self.levels[length]
    }

    /// Every retained formula, by increasing length.
    pub fn retained(&self) -> impl Iterator<Item = u32> + '_ {
        self.levels.iter().flatten().copied()
    }

    fn offer(
        &mut self,
        op: Op,
        a: u32,
        b: u32,
        m: Measures,
        den: &[u64],
        new: &mut Vec<u32>,
    ) -> Result<()> {
        self.stats.generated += 1;
        let h = hash_words(den);
        let words = self.words;
        let bucket = self.buckets.entry(h).or_default();
        let found = bucket
            .iter()
            .copied()
            .find(|&d| &self.dens[d as usize * words..(d as usize + 1) * words] == den);
        let den_id = match found {
            Some(d) => {
                let mode = self.cfg.dominance;
                let front = &self.fronts[d as usize];
                if front
                    .iter()
                    .any(|&e| self.entries[e as usize].m.dominates(&m, mode))
                {
                    return Ok(());
                }
                let entries = &self.entries;
                let alive = &mut self.alive;
                self.fronts[d as usize].retain(|&e| {
                    let beaten = m.dominates(&entries[e as usize].m, mode);
                    if beaten {
                        alive[e as usize] = false;
                    }
                    !beaten
                });
                d
            }
            None => {
                let d = self.fronts.len() as u32;
                bucket.push(d);
                self.dens.extend_from_slice(den);
                self.fronts.push(Vec::new());
                self.stats.denotations += 1;
                d
            }
        };
        if self.entries.len() >= self.cfg.entry_cap {
            return Err(Error::Resource {
                what: "retained formulas",
                needed: self.entries.len() as u64 + 1,
                cap: self.cfg.entry_cap as u64,
            });
        }
        let id = self.entries.len() as u32;
        self.entries.push(Entry {
            op,
            a,
            b,
            den: den_id,
            m,
        });
        self.alive.push(true);
        self.fronts[den_id as usize].push(id);
        new.push(id);
        Ok(())
    }

    /// Enumerates the next length. Returns `false` once the length cap is reached.
    pub fn step(&mut self) -> Result<bool> {
        let len = self.levels.len();
        if len > self.cfg.length_cap {
            return Ok(false);
        }
        let mut new = Vec::new();
        let words = self.words;
        let n = self.u.len();
        let mut scratch = vec![0u64; words];
        if len == 1 {
            let full = BitSet::full(n);
            let empty = BitSet::new(n);
            self.offer(
                Op::Bot,
                0,
                0,
                Measures::leaf(Op::Bot),
                empty.words(),
                &mut new,
            )?;
            self.offer(
                Op::Top,
                0,
                0,
                Measures::leaf(Op::Top),
                full.words(),
                &mut new,
            )?;
            for v in 1..=self.cfg.var_bound as u32 {
                let pos = self.atom_dens[v as usize - 1].clone();
                let neg = pos.complement();
                self.offer(
                    Op::Pos(v),
                    0,
                    0,
                    Measures::leaf(Op::Pos(v)),
                    pos.words(),
                    &mut new,
                )?;
                self.offer(
                    Op::Neg(v),
                    0,
                    0,
                    Measures::leaf(Op::Neg(v)),
                    neg.words(),
                    &mut new,
                )?;
            }
        } else {
            let global = self.cfg.language.allows_global();
            let prev: Vec<u32> = self.levels[len - 1].clone();
            for &a in &prev {
                let src: Vec<u64> = self.den_words(a).to_vec();
                let contains = |j: u32| src[j as usize / 64] >> (j % 64) & 1 == 1;
                let ma = self.entries[a as usize].m;
                let mut ops = vec![(Op::Dia, Symbol::Dia), (Op::Box, Symbol::Box)];
                if global {
                    ops.push((Op::Exists, Symbol::Exists));
                    ops.push((Op::Forall, Symbol::Forall));
                }
                for (op, sym) in ops {
                    scratch.iter_mut().for_each(|w| *w = 0);
                    match op {
                        Op::Dia | Op::Box => {
                            for i in 0..n {
                                let succ = self.u.successors(i);
                                let hit = if op == Op::Dia {
                                    succ.iter().any(|&j| contains(j))
                                } else {
                                    succ.iter().all(|&j| contains(j))
                                };
                                if hit {
                                    scratch[i / 64] |= 1 << (i % 64);
                                }
                            }
                        }
                        _ => {
                            for s in 0..self.u.scope_count() {
                                let members = self.u.scope_members(s);
                                let hit = if op == Op::Exists {
                                    members.iter().any(|&j| contains(j))
                                } else {
                                    members.iter().all(|&j| contains(j))
                                };
                                if hit {
                                    for &j in members {
                                        if self.u.scope_id(j as usize) == s {
                                            scratch[j as usize / 64] |= 1 << (j % 64);
                                        }
                                    }
                                }
                            }
                        }
                    }
                    let den = scratch.clone();
                    self.offer(op, a, 0, Measures::unary(sym, &ma), &den, &mut new)?;
                }
            }
            for la in 1..len - 1 {
                let lb = len - 1 - la;
                if la > lb {
                    break;
                }
                let left: Vec<u32> = self.levels[la].clone();
                let right: Vec<u32> = self.levels[lb].clone();
                for (ia, &a) in left.iter().enumerate() {
                    let ma = self.entries[a as usize].m;
                    let da = self.entries[a as usize].den as usize;
                    let start = if la == lb { ia } else { 0 };
                    for &b in &right[start..] {
                        let db = self.entries[b as usize].den as usize;
                        if da == db {
                            continue;
                        }
                        let mb = self.entries[b as usize].m;
                        for (op, sym) in [(Op::Or, Symbol::Or), (Op::And, Symbol::And)] {
                            {
                                let wa = &self.dens[da * words..(da + 1) * words];
                                let wb = &self.dens[db * words..(db + 1) * words];
                                for k in 0..words {
                                    scratch[k] = if op == Op::Or {
                                        wa[k] | wb[k]
                                    } else {
                                        wa[k] & wb[k]
                                    };
                                }
                            }
                            if scratch[..] == self.dens[da * words..(da + 1) * words]
                                || scratch[..] == self.dens[db * words..(db + 1) * words]
                            {
                                // absorbed: same denotation as a shorter part
                                self.stats.generated += 1;
                                continue;
                            }
                            let den = scratch.clone();
                            self.offer(op, a, b, Measures::binary(sym, &ma, &mb), &den, &mut new)?;
                        }
                    }
                }
            }
        }
        new.retain(|&id| self.alive[id as usize]);
        self.stats.retained = self.alive.iter().filter(|&&a| a).count() as u64;
        self.levels.push(new);
        Ok(true)
    }

    /// Enumerates up to the length cap.
    pub fn run(&mut self) -> Result<()> {
        while self.step()? {}
        Ok(())
    }

    /// Whether a retained formula is still on its denotation's Pareto front.
    pub fn is_alive(&self, id: u32) -> bool {
        self.alive[id as usize]
    }
}

/// One enumerated formula with its denotation and measures.
#[derive(Clone, Debug)]
pub struct Enumerated {
    pub formula: Formula,
    pub denotation: BitSet,
    pub measures: MeasureVector,
}

/// All Pareto-retained formulas up to `length_cap`, by increasing length.
pub fn enumerate(
    u: &Universe,
    var_bound: usize,
    length_cap: usize,
    language: Language,
) -> Result<Vec<Enumerated>> {
    let mut e = Enumerator::new(u, EnumConfig::new(var_bound, length_cap, language))?;
    e.run()?;
    Ok(e.retained()
        .filter(|&id| e.is_alive(id))
        .map(|id| Enumerated {
            formula: e.formula(id),
            denotation: e.denotation(id),
            measures: e.measures(id),
        })
        .collect())
}

fn words_contain(den: &[u64], set: &BitSet) -> bool {
    set.words().iter().zip(den).all(|(s, d)| s & !d == 0)
}

fn words_disjoint(den: &[u64], set: &BitSet) -> bool {
    set.words().iter().zip(den).all(|(s, d)| s & d == 0)
}

/// Picks the best candidate by (measure, length, printed form).
fn better(
    e: &Enumerator,
    measure: MeasureKind,
    id: u32,
    best: &mut Option<(u32, u32, u32, String)>,
) {
    let key = (e.measure(id, measure), e.measure(id, MeasureKind::Length));
    if let Some((bm, bl, _, _)) = best {
        if key > (*bm, *bl) {
            return;
        }
    }
    let text = e.formula(id).to_string();
    let replace = match best {
        None => true,
        Some((bm, bl, _, bt)) => key < (*bm, *bl) || text < *bt,
    };
    if replace {
        *best = Some((key.0, key.1, id, text));
    }
}

/// A formula true on every index of `left` and false on every index of
/// `right`, minimal for `measure` among formulas up to `length_cap`.
pub fn min_separating(
    u: &Universe,
    left: &BitSet,
    right: &BitSet,
    measure: MeasureKind,
    var_bound: usize,
    length_cap: usize,
    language: Language,
) -> Result<Option<(Formula, MeasureVector)>> {
    if left.intersects(right) {
        return Ok(None);
    }
    let cfg = EnumConfig::new(var_bound, length_cap, language).focus(measure);
    let mut e = Enumerator::new(u, cfg)?;
    let mut best: Option<(u32, u32, u32, String)> = None;
    while e.step()? {
        let len = e.length();
        for &id in e.level(len) {
            let den = e.den_words(id);
            if words_contain(den, left) && words_disjoint(den, right) {
                better(&e, measure, id, &mut best);
            }
        }
        if measure == MeasureKind::Length && best.is_some() {
            break;
        }
    }
    Ok(best.map(|(_, _, id, _)| (e.formula(id), e.measures(id))))
}

/// Index groups of a witness universe: one per positive and negative frame.
#[derive(Clone, Debug)]
pub struct WitnessUniverse {
    pub universe: Universe,
    pub positive_groups: Vec<BitSet>,
    pub negative_groups: Vec<BitSet>,
}

impl WitnessUniverse {
    /// All valuations of `p1..p<var_bound>` over every frame of `w`, all points,
    /// quotiented by bisimilarity for `language`.
    pub fn build(
        w: &WitnessSet,
        var_bound: usize,
        language: Language,
        node_cap: u64,
    ) -> Result<WitnessUniverse> {
        let frames: Vec<_> = w.frames().cloned().collect();
        let universe = Universe::expand_quotient(frames, var_bound, language, node_cap)?;
        let p = w.positives.len();
        let positive_groups = (0..p).map(|s| universe.source_indices(s)).collect();
        let negative_groups = (p..p + w.negatives.len())
            .map(|s| universe.source_indices(s))
            .collect();
        Ok(WitnessUniverse {
            universe,
            positive_groups,
            negative_groups,
        })
    }

    fn separates_words(&self, den: &[u64], positive_union: &BitSet) -> bool {
        words_contain(den, positive_union)
            && self.negative_groups.iter().all(|g| !words_contain(den, g))
    }

    /// Whether a denotation is valid on every positive and on no negative frame.
    pub fn separates(&self, den: &BitSet) -> bool {
        self.separates_words(den.words(), &self.positive_union())
    }

    fn positive_union(&self) -> BitSet {
        let mut all = self.universe.empty_set();
        for g in &self.positive_groups {
            all.union_with(g);
        }
        all
    }
}

/// Minimal frame-level separator of a witness set for `measure`, among
/// formulas up to `length_cap`.
pub fn min_frame_separator(
    wu: &WitnessUniverse,
    measure: MeasureKind,
    var_bound: usize,
    length_cap: usize,
    language: Language,
) -> Result<Option<(Formula, MeasureVector)>> {
    let cfg = EnumConfig::new(var_bound, length_cap, language).focus(measure);
    let mut e = Enumerator::new(&wu.universe, cfg)?;
    let pos = wu.positive_union();
    let mut best = None;
    while e.step()? {
        let len = e.length();
        for &id in e.level(len) {
            if wu.separates_words(e.den_words(id), &pos) {
                better(&e, measure, id, &mut best);
            }
        }
        if measure == MeasureKind::Length && best.is_some() {
            break;
        }
    }
    Ok(best.map(|(_, _, id, _)| (e.formula(id), e.measures(id))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Refuted(Formula),
    Inconclusive(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Proved => "proved",
            Verdict::Refuted(_) => "refuted",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub witnesses: String,
    pub language: Language,
    pub measure: MeasureKind,
    pub claimed_bound: u32,
    pub var_bound: usize,
    pub length_cap: usize,
    pub verdict: Verdict,
    pub universe_size: usize,
    pub node_count: usize,
    pub stats: EnumStats,
    pub wall_ms: u64,
    /// Extra recorded parameters, e.g. a truncation depth.
    pub notes: Vec<(String, String)>,
}

impl Certificate {
    /// Whether a `Proved` verdict covers all formulas, not only those up to
    /// the length cap.
    pub fn is_full_proof(&self) -> bool {
        self.measure == MeasureKind::Length && self.length_cap + 1 >= self.claimed_bound as usize
    }

    /// The certificate text without the timing line.
    pub fn primary_text(&self) -> String {
        self.render(false)
    }

    fn render(&self, timing: bool) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            s.push_str(k);
            s.push(' ');
            s.push_str(&v);
            s.push('\n');
        };
        line("certificate", "v1".into());
        line("witnesses", self.witnesses.clone());
        line("language", self.language.name().into());
        line("measure", self.measure.name());
        line("bound", self.claimed_bound.to_string());
        line("vars", self.var_bound.to_string());
        line("length-cap", self.length_cap.to_string());
        line(
            "scope",
            if self.is_full_proof() {
                "full"
            } else {
                "capped"
            }
            .into(),
        );
        match &self.verdict {
            Verdict::Proved => line("verdict", "proved".into()),
            Verdict::Refuted(f) => {
                line("verdict", "refuted".into());
                line("formula", f.to_string());
            }
            Verdict::Inconclusive(why) => {
                line("verdict", "inconclusive".into());
                line("reason", why.clone());
            }
        }
        line("universe", self.universe_size.to_string());
        line("nodes", self.node_count.to_string());
        line("generated", self.stats.generated.to_string());
        line("denotations", self.stats.denotations.to_string());
        line("retained", self.stats.retained.to_string());
        for (k, v) in &self.notes {
            line("note", format!("{k} {v}"));
        }
        if timing {
            line("wall-ms", self.wall_ms.to_string());
        }
        s
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Certificate> {
        let mut fields: FxHashMap<&str, &str> = FxHashMap::default();
        let mut notes = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (k, v) = raw.split_once(' ').unwrap_or((raw, ""));
            if k == "note" {
                let (nk, nv) = v.split_once(' ').unwrap_or((v, ""));
                notes.push((nk.to_string(), nv.to_string()));
            } else if fields.insert(k, v).is_some() {
                return Err(Error::Format {
                    line: no + 1,
                    msg: format!("duplicate field {k}"),
                });
            }
        }
        let get = |k: &str| {
            fields.get(k).copied().ok_or_else(|| Error::Format {
                line: 0,
                msg: format!("missing field {k}"),
            })
        };
        let num = |k: &str| -> Result<u64> {
            get(k)?.parse().map_err(|_| Error::Format {
                line: 0,
                msg: format!("field {k} is not a number"),
            })
        };
        let verdict = match get("verdict")? {
            "proved" => Verdict::Proved,
            "refuted" => Verdict::Refuted(get("formula")?.parse()?),
            "inconclusive" => Verdict::Inconclusive(get("reason").unwrap_or("").to_string()),
            other => {
                return Err(Error::Format {
                    line: 0,
                    msg: format!("unknown verdict {other}"),
                })
            }
        };
        Ok(Certificate {
            witnesses: get("witnesses")?.to_string(),
            language: get("language")?.parse()?,
            measure: get("measure")?.parse()?,
            claimed_bound: num("bound")? as u32,
            var_bound: num("vars")? as usize,
            length_cap: num("length-cap")? as usize,
            verdict,
            universe_size: num("universe")? as usize,
            node_count: num("nodes")? as usize,
            stats: EnumStats {
                generated: num("generated")?,
                denotations: num("denotations")?,
                retained: num("retained")?,
            },
            wall_ms: fields
                .get("wall-ms")
                .and_then(|v| v.parse().ok())
                .unwrap_or(0),
            notes,
        })
    }
}

/// Certification parameters beyond the witness set.
#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    pub measure: MeasureKind,
    pub claimed_bound: u32,
    pub var_bound: usize,
    pub length_cap: usize,
    pub language: Language,
    pub node_cap: u64,
    pub entry_cap: usize,
}

impl CertifyOptions {
    /// Defaults: one variable, basic language, length cap `bound - 1` for
    /// length and `bound + 2` otherwise.
    pub fn new(measure: MeasureKind, claimed_bound: u32) -> CertifyOptions {
        let length_cap = if measure == MeasureKind::Length {
            claimed_bound.saturating_sub(1) as usize
        } else {
            claimed_bound as usize + 2
        };
        CertifyOptions {
            measure,
            claimed_bound,
            var_bound: 1,
            length_cap,
            language: Language::Basic,
            node_cap: DEFAULT_NODE_CAP,
            entry_cap: DEFAULT_ENTRY_CAP,
        }
    }
}

/// Checks that no formula with `measure < claimed_bound` (and length within
/// the cap) is valid on every positive and on no negative frame of `w`.
pub fn certify_bound(w: &WitnessSet, opts: &CertifyOptions) -> Certificate {
    let start = Instant::now();
    let mut cert = Certificate {
        witnesses: w.name.clone(),
        language: opts.language,
        measure: opts.measure,
        claimed_bound: opts.claimed_bound,
        var_bound: opts.var_bound,
        length_cap: opts.length_cap,
        verdict: Verdict::Proved,
        universe_size: 0,
        node_count: 0,
        stats: EnumStats::default(),
        wall_ms: 0,
        notes: Vec::new(),
    };
    let outcome = certify_inner(w, opts, &mut cert);
    if let Err(e) = outcome {
        cert.verdict = Verdict::Inconclusive(e.to_string());
    }
    cert.wall_ms = start.elapsed().as_millis() as u64;
    cert
}

fn certify_inner(w: &WitnessSet, opts: &CertifyOptions, cert: &mut Certificate) -> Result<()> {
    let wu = WitnessUniverse::build(w, opts.var_bound, opts.language, opts.node_cap)?;
    cert.universe_size = wu.universe.len();
    cert.node_count = wu.universe.node_count();
    let mut cfg =
        EnumConfig::new(opts.var_bound, opts.length_cap, opts.language).focus(opts.measure);
    cfg.entry_cap = opts.entry_cap;
    let mut e = Enumerator::new(&wu.universe, cfg)?;
    let pos = wu.positive_union();
    let mut found = None;
    loop {
        let more = e.step();
        cert.stats = e.stats();
        if !more? {
            break;
        }
        let len = e.length();
        for &id in e.level(len) {
            if e.measure(id, opts.measure) < opts.claimed_bound
                && wu.separates_words(e.den_words(id), &pos)
            {
                found = Some(e.formula(id));
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    cert.verdict = match found {
        None => Verdict::Proved,
        Some(f) => {
            let bits = (opts.var_bound.max(1)
                * w.frames().map(|f| f.state_count()).max().unwrap_or(1))
                as u32;
            let positives_ok = w
                .positives
                .iter()
                .map(|fr| frame_valid_capped(fr, &f, bits.max(24)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|v| v);
            let negatives_ok = w
                .negatives
                .iter()
                .map(|fr| frame_valid_capped(fr, &f, bits.max(24)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|v| !v);
            if positives_ok && negatives_ok {
                Verdict::Refuted(f)
            } else {
                Verdict::Inconclusive(format!("separator {f} failed re-validation"))
            }
        }
    };
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::gallery::{symmetry_witnesses, transfer_witnesses};
    use crate::kripke::{Frame, Model};

    #[test]
    fn single_dead_point_has_two_denotations() {
        let u = Universe::from_models(vec![Model::empty(Frame::new(1))]);
        let all = enumerate(&u, 0, 3, Language::Basic).unwrap();
        let dens: std::collections::BTreeSet<_> =
            all.iter().map(|e| e.denotation.count()).collect();
        assert_eq!(dens.len(), 2);
        // <> T has no bottom symbol, so it survives next to F under all measures
        assert!(all.iter().any(|e| e.formula == parse("<> T").unwrap()));

        let mut lean = Enumerator::new(
            &u,
            EnumConfig::new(0, 3, Language::Basic).focus(MeasureKind::Length),
        )
        .unwrap();
        lean.run().unwrap();
        assert_eq!(lean.retained().count(), 2);
    }

    #[test]
    fn stored_denotations_replay() {
        let u = Universe::expand(vec![Frame::from_edges(2, [(0, 1), (1, 1)])], 1, 1 << 20).unwrap();
        for e in enumerate(&u, 1, 5, Language::Global).unwrap() {
            assert_eq!(denotation(&u, &e.formula), e.denotation, "{}", e.formula);
            assert_eq!(e.formula.measure_all(), e.measures);
            for i in 0..u.len() {
                assert_eq!(
                    u.pointed_model(i).satisfies(&e.formula),
                    e.denotation.contains(i)
                );
            }
        }
    }

    #[test]
    fn reflexivity_separator_has_length_four() {
        let w = transfer_witnesses(0, 1).unwrap();
        let wu = WitnessUniverse::build(&w, 1, Language::Basic, 1 << 20).unwrap();
        let (f, m) = min_frame_separator(&wu, MeasureKind::Length, 1, 6, Language::Basic)
            .unwrap()
            .unwrap();
        assert_eq!(m.length, 4, "{f}");
        assert!(wu.separates(&denotation(&wu.universe, &f)));
    }

    #[test]
    fn certificates_prove_and_refute() {
        let w = symmetry_witnesses();
        let c = certify_bound(&w, &CertifyOptions::new(MeasureKind::Length, 5));
        assert_eq!(c.verdict, Verdict::Proved);
        assert!(c.is_full_proof());

        let w = transfer_witnesses(0, 1).unwrap();
        let c = certify_bound(&w, &CertifyOptions::new(MeasureKind::Length, 5));
        match &c.verdict {
            Verdict::Refuted(f) => assert_eq!(f.len(), 4),
            other => panic!("{other:?}"),
        }
        let back: Certificate = c.to_string().parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bisimilar_sides_have_no_separator() {
        let m = Model::from_labels(Frame::from_edges(1, [(0, 0)]), vec![1]).unwrap();
        let n = Model::from_labels(Frame::from_edges(2, [(0, 1), (1, 0)]), vec![1, 1]).unwrap();
        let u = Universe::from_models(vec![m, n]);
        let r = min_separating(
            &u,
            &u.set_of([0]),
            &u.set_of([1]),
            MeasureKind::Length,
            1,
            6,
            Language::Basic,
        )
        .unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn focus_on_var_count_keeps_variable_sets() {
        let u = Universe::expand(vec![Frame::new(1)], 2, 1 << 20).unwrap();
        let left = u.set_of((0..u.len()).filter(|&i| u.atoms(i) & 1 == 1));
        let right = left.complement();
        let (f, m) = min_separating(
            &u,
            &left,
            &right,
            MeasureKind::VarCount,
            2,
            3,
            Language::Basic,
        )
        .unwrap()
        .unwrap();
        assert_eq!(m.vars, 1);
        assert_eq!(f, parse("p1").unwrap());
    }
}
