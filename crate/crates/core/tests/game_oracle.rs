//! The game engine against a naive search of the full game (overlapping
//! covers, every choice function) and against exhaustive synthesis.

use std::collections::HashMap;

use rand::Rng;

use modal_succinctness::bits::BitSet;
use modal_succinctness::formula::Symbol;
use modal_succinctness::game::{
    min_cost_fgm, psi_of_tree, verify_closed_tree, GameOptions, GamePosition,
};
use modal_succinctness::kripke::Universe;
use modal_succinctness::report::random_position;
use modal_succinctness::sample::{random_frame, random_model, rng};
use modal_succinctness::synth::{denotation, min_separating};
use modal_succinctness::{Formula, Language, MeasureKind};

struct Naive<'u> {
    u: &'u Universe,
    lang: Language,
    memo: HashMap<(Vec<usize>, Vec<usize>, u32), bool>,
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0..1u32 << items.len())
        .map(|m| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

fn choices(options: &[Vec<u32>]) -> Vec<Vec<usize>> {
    options.iter().fold(vec![vec![]], |acc, o| {
        acc.iter()
            .flat_map(|p| {
                o.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x as usize);
                    q
                })
            })
            .collect()
    })
}

fn norm(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Naive<'_> {
    fn steps(&self, global: bool, i: usize) -> Vec<u32> {
        if global {
            self.u.same_model(i).to_vec()
        } else {
            self.u.successors(i).to_vec()
        }
    }

    fn wins(&mut self, l: Vec<usize>, r: Vec<usize>, len: u32) -> bool {
        if len == 0 {
            return false;
        }
        let key = (l.clone(), r.clone(), len);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut win = l.is_empty() || r.is_empty();
        let p1 = |i: usize| self.u.atoms(i) & 1 != 0;
        win |= l.iter().all(|&i| p1(i)) && r.iter().all(|&i| !p1(i));
        win |= l.iter().all(|&i| !p1(i)) && r.iter().all(|&i| p1(i));
        if !win && len >= 2 {
            let globals: &[bool] = if self.lang == Language::Global {
                &[false, true]
            } else {
                &[false]
            };
            for &g in globals {
                // <> / E: Hercules picks a step for each left point
                let opts: Vec<Vec<u32>> = l.iter().map(|&i| self.steps(g, i)).collect();
                if opts.iter().all(|o| !o.is_empty()) {
                    let right = norm(
                        r.iter()
                            .flat_map(|&i| self.steps(g, i))
                            .map(|x| x as usize)
                            .collect(),
                    );
                    for c in choices(&opts) {
                        if self.wins(norm(c), right.clone(), len - 1) {
                            win = true;
                            break;
                        }
                    }
                }
                // [] / A: Hercules picks a step for each right point
                let opts: Vec<Vec<u32>> = r.iter().map(|&i| self.steps(g, i)).collect();
                if !win && opts.iter().all(|o| !o.is_empty()) {
                    let left = norm(
                        l.iter()
                            .flat_map(|&i| self.steps(g, i))
                            .map(|x| x as usize)
                            .collect(),
                    );
                    for c in choices(&opts) {
                        if self.wins(left.clone(), norm(c), len - 1) {
                            win = true;
                            break;
                        }
                    }
                }
                if win {
                    break;
                }
            }
        }
        if !win && len >= 3 {
            'outer: for l1 in 1..len - 1 {
                let l2 = len - 1 - l1;
                for a in subsets(&l) {
                    for b in subsets(&l) {
                        if norm([a.clone(), b.clone()].concat()) == l
                            && self.wins(a.clone(), r.clone(), l1)
                            && self.wins(b, r.clone(), l2)
                        {
                            win = true;
                            break 'outer;
                        }
                    }
                }
                for a in subsets(&r) {
                    for b in subsets(&r) {
                        if norm([a.clone(), b.clone()].concat()) == r
                            && self.wins(l.clone(), a.clone(), l1)
                            && self.wins(l.clone(), b, l2)
                        {
                            win = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        self.memo.insert(key, win);
        win
    }
}

fn tiny_position(r: &mut impl Rng) -> (Universe, BitSet, BitSet) {
    let mut models = Vec::new();
    let mut total = 0;
    while total < 4 {
        let f = random_frame(r, 2, 0.4);
        total += f.state_count();
        models.push(random_model(r, f, 1));
    }
    let u = Universe::from_models(models);
    loop {
        let sides: Vec<u32> = (0..u.len()).map(|_| r.gen_range(0..3)).collect();
        let left = u.set_of((0..u.len()).filter(|&i| sides[i] == 0));
        let right = u.set_of((0..u.len()).filter(|&i| sides[i] == 1));
        if !left.is_empty() && !right.is_empty() {
            return (u, left, right);
        }
    }
}

#[test]
fn engine_matches_naive_game_with_overlapping_covers() {
    let mut r = rng(21);
    let mut closed = 0;
    for i in 0..40 {
        let lang = if i % 2 == 0 {
            Language::Basic
        } else {
            Language::Global
        };
        let (u, left, right) = tiny_position(&mut r);
        let mut naive = Naive {
            u: &u,
            lang,
            memo: HashMap::new(),
        };
        let expect =
            (1..=6).find(|&len| naive.wins(left.iter().collect(), right.iter().collect(), len));
        let got = min_cost_fgm(
            &u,
            &GamePosition::new(left.clone(), right.clone()),
            &GameOptions::new(MeasureKind::Length, 7, lang, 1),
        )
        .unwrap()
        .map(|(c, _)| c);
        assert_eq!(got, expect, "position #{i}");
        closed += usize::from(got.is_some());
    }
    assert!(closed > 10);
}

#[test]
fn engine_matches_enumeration_on_random_universes() {
    let mut r = rng(22);
    for i in 0..40 {
        let lang = if i % 2 == 0 {
            Language::Basic
        } else {
            Language::Global
        };
        let (u, left, right) = random_position(&mut r);
        let pos = GamePosition::new(left.clone(), right.clone());
        let game =
            min_cost_fgm(&u, &pos, &GameOptions::new(MeasureKind::Length, 9, lang, 1)).unwrap();
        let synth = min_separating(&u, &left, &right, MeasureKind::Length, 1, 8, lang).unwrap();
        assert_eq!(
            game.as_ref().map(|(c, _)| *c as usize),
            synth.as_ref().map(|(f, _)| f.len()),
            "#{i}"
        );
        if let Some((cost, t)) = game {
            verify_closed_tree(&u, &t).unwrap();
            let psi = psi_of_tree(&t);
            assert_eq!(psi.len(), cost as usize);
            let den = denotation(&u, &psi);
            assert!(left.is_subset(&den) && !right.intersects(&den));
        }
    }
}

#[test]
fn other_measures_match_enumeration() {
    let mut r = rng(23);
    let kinds = [
        MeasureKind::Count(Symbol::Dia),
        MeasureKind::Count(Symbol::Box),
        MeasureKind::Count(Symbol::Or),
        MeasureKind::Count(Symbol::And),
        MeasureKind::ModalDepth,
        MeasureKind::VarCount,
    ];
    for i in 0..30 {
        let (u, left, right) = random_position(&mut r);
        let kind = kinds[i % kinds.len()];
        let mut opts = GameOptions::new(kind, 6, Language::Basic, 2);
        opts.length_cap = 6;
        let game =
            min_cost_fgm(&u, &GamePosition::new(left.clone(), right.clone()), &opts).unwrap();
        let synth = min_separating(&u, &left, &right, kind, 2, 6, Language::Basic).unwrap();
        let want = synth.map(|(_, m)| m.get(kind)).filter(|&v| v < 6);
        assert_eq!(game.as_ref().map(|(c, _)| *c), want, "#{i} {kind}");
        if let Some((cost, t)) = game {
            let psi: Formula = psi_of_tree(&t);
            assert_eq!(psi.measure(kind), cost);
            assert!(psi.len() <= 6);
        }
    }
}
