mod common;

use proptest::prelude::*;
use rand::Rng;

use modal_succinctness::kripke::{bisimilar, frame_valid, Frame, PointedModel, Universe};
use modal_succinctness::sample::{random_frame, random_model, rng, split_state};
use modal_succinctness::synth::{denotation, enumerate};
use modal_succinctness::{parse, Formula, Language};

fn sample_model(r: &mut impl Rng, states: usize, vars: usize) -> modal_succinctness::kripke::Model {
    let f = random_frame(r, states, 0.4);
    random_model(r, f, vars)
}

#[test]
fn bisimilar_points_agree_on_enumerated_formulas() {
    let mut r = rng(11);
    for i in 0..60 {
        let lang = if i % 2 == 0 {
            Language::Basic
        } else {
            Language::Global
        };
        let m = sample_model(&mut r, 4, 1);
        let s = r.gen_range(0..m.state_count());
        let c = split_state(&mut r, &m, s);
        let p = r.gen_range(0..m.state_count());
        assert!(bisimilar(
            &PointedModel::new(m.clone(), p),
            &PointedModel::new(c.clone(), p),
            lang
        ));
        let u = Universe::from_models(vec![m.clone(), c.clone()]);
        for e in enumerate(&u, 1, 7, lang).unwrap() {
            assert_eq!(
                m.eval(p, &e.formula),
                c.eval(p, &e.formula),
                "{}",
                e.formula
            );
        }
    }
}

#[test]
fn non_bisimilar_points_are_told_apart() {
    let mut r = rng(12);
    let mut separated = 0;
    for _ in 0..80 {
        let a = sample_model(&mut r, 3, 1);
        let b = sample_model(&mut r, 3, 1);
        let (pa, pb) = (
            r.gen_range(0..a.state_count()),
            r.gen_range(0..b.state_count()),
        );
        if bisimilar(
            &PointedModel::new(a.clone(), pa),
            &PointedModel::new(b.clone(), pb),
            Language::Basic,
        ) {
            continue;
        }
        // at most 6 states in all: length 9 is enough on this seed
        let u = Universe::from_models(vec![a.clone(), b.clone()]);
        let differ = enumerate(&u, 1, 9, Language::Basic)
            .unwrap()
            .iter()
            .any(|e| a.eval(pa, &e.formula) != b.eval(pb, &e.formula));
        assert!(differ);
        separated += 1;
    }
    assert!(separated > 20);
}

#[test]
fn universe_denotation_matches_model_evaluation() {
    let mut r = rng(13);
    let models: Vec<_> = (0..4).map(|_| sample_model(&mut r, 4, 2)).collect();
    let u = Universe::from_models(models.clone());
    for text in ["<> p1", "([] p2 | E ~p1)", "A <> T", "(p1 & [] <> p2)"] {
        let f = parse(text).unwrap();
        let den = denotation(&u, &f);
        for (src, m) in models.iter().enumerate() {
            for w in 0..m.state_count() {
                assert_eq!(den.contains(u.index_of(src, 0, w)), m.eval(w, &f), "{text}");
            }
        }
    }
}

#[test]
fn conjunction_of_valid_formulas_is_valid() {
    let chain = Frame::from_edges(3, [(0, 1), (1, 2), (0, 2), (0, 0), (1, 1), (2, 2)]);
    let a = parse("(~p1 | <> p1)").unwrap();
    let b = parse("([] [] ~p1 | <> p1)").unwrap();
    assert!(frame_valid(&chain, &a).unwrap() && frame_valid(&chain, &b).unwrap());
    assert!(frame_valid(&chain, &Formula::and(a, b)).unwrap());
}

proptest! {
    #[test]
    fn global_truth_is_point_independent(f in common::formula(2, Language::Global, 4), m in common::model(4, 2)) {
        let g = Formula::exists(f);
        let first = m.eval(0, &g);
        for w in 1..m.state_count() {
            prop_assert_eq!(m.eval(w, &g), first);
        }
    }

    #[test]
    fn fresh_variables_do_not_change_validity(f in common::formula(1, Language::Basic, 4), m in common::model(3, 0)) {
        let renamed = f.rename(&|_| modal_succinctness::Var::new(2));
        prop_assert_eq!(frame_valid(&m.frame, &f).unwrap(), frame_valid(&m.frame, &renamed).unwrap());
        let g = Formula::or(f.clone(), Formula::and(Formula::pos(3), Formula::neg(3)));
        prop_assert_eq!(frame_valid(&m.frame, &f).unwrap(), frame_valid(&m.frame, &g).unwrap());
    }
}
