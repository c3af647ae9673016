//! Seeded random frames, models and bisimilar copies for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kripke::{Frame, Model};

/// The generator every seeded check uses.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A frame with `1..=max_states` states, each edge (loops included) present
/// with probability `density`.
pub fn random_frame(rng: &mut impl Rng, max_states: usize, density: f64) -> Frame {
    let n = rng.gen_range(1..=max_states);
    let mut f = Frame::new(n);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(density) {
                f.add_edge(u, v);
            }
        }
    }
    f
}

/// A random valuation of `p1..p<vars>` on `frame`.
pub fn random_model(rng: &mut impl Rng, frame: Frame, vars: usize) -> Model {
    let n = frame.state_count();
    let labels = (0..n).map(|_| rng.gen_range(0..1u64 << vars)).collect();
    Model::from_labels(frame, labels).expect("one label per state")
}

/// A copy of `m` with state `s` duplicated: the clone has the same label
/// and successors, and each edge into `s` is redirected to the clone at
/// random. The result is bisimilar to `m` in both languages, with `point`
/// mapped to itself.
pub fn split_state(rng: &mut impl Rng, m: &Model, s: usize) -> Model {
    let n = m.state_count();
    let mut f = Frame::new(n + 1);
    for (u, v) in m.frame.edges() {
        let target = if v == s && rng.gen_bool(0.5) { n } else { v };
        f.add_edge(u, target);
        if u == s {
            let target = if v == s && rng.gen_bool(0.5) { n } else { v };
            f.add_edge(n, target);
        }
    }
    let mut labels = m.labels().to_vec();
    labels.push(m.label(s));
    Model::from_labels(f, labels).expect("one label per state")
}
