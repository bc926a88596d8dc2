use std::sync::OnceLock;

use dfml_core::correspondence::{correspond_system, Options};
use dfml_core::reduction::{classify, DEFAULT_MAX_NODES};
use dfml_core::semantics::enumerate::{count, incidences, sample, search, search_up_to, Uses};
use dfml_core::semantics::frame::{bits, full, has};
use dfml_core::semantics::frame_file::{parse_frame, write_frame, FrameFileError};
use dfml_core::semantics::model::{eval_dfml, for_each_valuation};
use dfml_core::semantics::oracle::{valid_points, verify_enumerated, verify_frames};
use dfml_core::semantics::{Compiled, Frame, FrameError, Mask};
use dfml_core::syntax::dfml::parse_sequent;
use dfml_core::syntax::{Dfml, Fo, Sort};
use dfml_core::translation::Thread;
use proptest::prelude::*;

fn frames() -> &'static [Frame] {
    static F: OnceLock<Vec<Frame>> = OnceLock::new();
    F.get_or_init(|| {
        let mut out = Vec::new();
        for (n1, nd, seed) in [(1, 2, 1), (2, 2, 2), (3, 2, 3), (2, 3, 4), (3, 3, 5)] {
            out.extend(sample(n1, nd, Uses::all(), 6, seed));
        }
        out
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Mask> {
    0..=full(n)
}

fn sub(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

#[test]
fn polarity_is_a_galois_connection() {
    for f in frames() {
        for u in subsets(f.n1) {
            let p = f.polar1(u);
            assert!(sub(u, f.polard(p)));
            assert_eq!(f.polar1(f.polard(p)), p);
            assert!(f.is_galois(Sort::One, f.closure(Sort::One, u)));
            for w in subsets(f.n1) {
                if sub(u, w) {
                    assert!(sub(f.polar1(w), p));
                }
            }
        }
        for v in subsets(f.nd) {
            assert!(sub(v, f.polar1(f.polard(v))));
        }
        // Stable sets are closed under intersection.
        let st = f.stable_sets(Sort::One);
        for &a in st {
            for &b in st {
                assert!(f.is_galois(Sort::One, a & b));
            }
        }
    }
}

#[test]
fn adjunctions_and_residuation() {
    for f in frames() {
        for a in subsets(f.n1) {
            for b in subsets(f.n1) {
                assert_eq!(sub(f.diav(a), b), sub(a, f.box1(b)));
                for c in subsets(f.n1) {
                    assert_eq!(sub(f.odot(a, b), c), sub(b, f.rspoon(a, c)));
                }
                assert!(sub(b, f.rspoon(a, f.odot(a, b))));
                assert!(sub(f.odot(a, f.rspoon(a, b)), b));
            }
        }
        for a in subsets(f.nd) {
            for b in subsets(f.nd) {
                assert_eq!(sub(f.diam(a), b), sub(a, f.boxd(b)));
            }
        }
    }
}

#[test]
fn image_operators_distribute_over_joins() {
    for f in frames() {
        for a in subsets(f.n1) {
            for b in subsets(f.n1) {
                assert_eq!(f.diav(a | b), f.diav(a) | f.diav(b));
                assert_eq!(f.tdown(a | b), f.tdown(a) | f.tdown(b));
                for c in subsets(f.n1) {
                    assert_eq!(f.odot(a | b, c), f.odot(a, c) | f.odot(b, c));
                    assert_eq!(f.odot(c, a | b), f.odot(c, a) | f.odot(c, b));
                }
                for v in subsets(f.nd) {
                    assert_eq!(f.tright(a | b, v), f.tright(a, v) | f.tright(b, v));
                }
            }
        }
        for a in subsets(f.nd) {
            for b in subsets(f.nd) {
                assert_eq!(f.diam(a | b), f.diam(a) | f.diam(b));
            }
        }
    }
}

#[test]
fn boxes_preserve_stability() {
    for f in frames() {
        for &a in f.stable_sets(Sort::One) {
            assert!(f.is_galois(Sort::One, f.boxm(a)));
        }
        for &b in f.stable_sets(Sort::Dual) {
            assert!(f.is_galois(Sort::Dual, f.boxv(b)));
            assert!(f.is_galois(Sort::One, f.btdown(b)));
        }
    }
}

fn kripke(n: usize, r_dia: Vec<Mask>, r_box: Vec<Mask>, r_neg: Vec<Mask>, t: Vec<Vec<Mask>>) -> Frame {
    Frame::new(n, n, (0..n).map(|x| 1 << x).collect(), r_dia, r_box, r_neg, t).unwrap()
}

/// Textbook satisfaction on a Kripke frame, written against the base
/// relations only.
fn classical(f: &Frame, phi: &Dfml, val: &[Mask]) -> Mask {
    let n = f.n1;
    let all = full(n);
    let pts = |p: &dyn Fn(usize) -> bool| (0..n).filter(|&x| p(x)).fold(0, |m, x| m | 1 << x);
    match phi {
        Dfml::Var(i) => val[*i as usize],
        Dfml::Top => all,
        Dfml::Bot => 0,
        Dfml::And(a, b) => classical(f, a, val) & classical(f, b, val),
        Dfml::Or(a, b) => classical(f, a, val) | classical(f, b, val),
        Dfml::Box(a) => {
            let e = classical(f, a, val);
            pts(&|x| sub(f.r_box[x], e))
        }
        Dfml::Dia(a) => {
            let e = classical(f, a, val);
            pts(&|x| f.r_dia[x] & e != 0)
        }
        Dfml::Neg(a) => {
            let e = classical(f, a, val);
            pts(&|x| f.r_neg[x] & e == 0)
        }
        Dfml::Imp(a, b) => {
            let (ea, eb) = (classical(f, a, val), classical(f, b, val));
            pts(&|u| bits(ea).all(|x| sub(f.t[u][x], eb)))
        }
    }
}

fn dfml() -> impl Strategy<Value = Dfml> {
    let leaf = prop_oneof![(0u32..2).prop_map(Dfml::var), Just(Dfml::Top), Just(Dfml::Bot)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Dfml::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Dfml::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Dfml::imp(a, b)),
            inner.clone().prop_map(Dfml::boxed),
            inner.clone().prop_map(Dfml::dia),
            inner.prop_map(Dfml::neg),
        ]
    })
}

fn rows(n: usize) -> impl Strategy<Value = Vec<Mask>> {
    proptest::collection::vec(0..=full(n), n)
}

fn kripke_frame() -> impl Strategy<Value = Frame> {
    (1usize..=3).prop_flat_map(|n| {
        (rows(n), rows(n), rows(n), proptest::collection::vec(rows(n), n))
            .prop_map(move |(d, b, g, t)| kripke(n, d, b, g, t))
    })
}

proptest! {
    #[test]
    fn kripke_frames_collapse_to_classical_semantics(f in kripke_frame(), phi in dfml()) {
        let n = f.n1;
        prop_assert_eq!(f.stable_sets(Sort::One).len(), 1 << n);
        let dom: Vec<Mask> = (0..=full(n)).collect();
        let ok = for_each_valuation(2, &[(0, dom.clone()), (1, dom)], |v| eval_dfml(&f, &phi, v) == classical(&f, &phi, v));
        prop_assert!(ok, "{}", phi);
    }
}

#[test]
fn frame_file_round_trip() {
    for f in frames() {
        let g = parse_frame(&write_frame(f), true).unwrap();
        assert_eq!((g.n1, g.nd), (f.n1, f.nd));
        assert_eq!(g.i, f.i);
        assert_eq!(g.r_dia, f.r_dia);
        assert_eq!(g.r_box, f.r_box);
        assert_eq!(g.r_neg, f.r_neg);
        assert_eq!(g.t, f.t);
    }
}

#[test]
fn frame_file_syntax() {
    let src = "# two points\nversion: 1\nz1: [a, b]\nzd: [y0, y1]\nI: [[a, y0], [b, y1]]\nRdia: [[a, b]]\n";
    let f = parse_frame(src, true).unwrap();
    assert_eq!(f.r_dia, vec![0b10, 0]);
    assert_eq!(f.r_box, vec![0, 0]);
    assert!(matches!(parse_frame("version: 2\n", true), Err(FrameFileError::Version(_))));
    assert!(matches!(parse_frame("z1: [a]\nzd: [b]\nI: [[a, c]]\n", true), Err(FrameFileError::Element(_))));
    assert!(matches!(parse_frame("z1: [a]\nzd: [b]\nI: [[a, b]\n", true), Err(FrameFileError::Syntax(3, _))));
    assert!(matches!(parse_frame("z1: [a]\nzd: [b]\nfoo: []\n", true), Err(FrameFileError::Syntax(3, _))));
}

#[test]
fn frame_conditions_are_enforced() {
    // Two sort-1 points with the same row are not separated.
    let e = Frame::new(2, 1, vec![1, 1], vec![0, 0], vec![0], vec![0], vec![vec![0, 0]]);
    assert!(matches!(e, Err(FrameError::Separation(Sort::One))));
    let src = "z1: [a, b]\nzd: [y]\nI: [[a, y], [b, y]]\n";
    assert!(matches!(parse_frame(src, true), Err(FrameFileError::Frame(FrameError::Separation(_)))));
    assert!(parse_frame(src, false).is_ok());
    // Some relation over this incidence has a non-Galois section.
    let i = vec![0b01, 0b11];
    let smooth_fails = (0..16).any(|k| {
        let r = vec![k & 3, k >> 2];
        matches!(Frame::new(2, 2, i.clone(), r, vec![0, 0], vec![0, 0], vec![vec![0; 2]; 2]), Err(FrameError::Smoothness(_)))
    });
    assert!(smooth_fails);
    assert!(matches!(Frame::new(0, 1, vec![], vec![], vec![0], vec![0], vec![vec![]]), Err(FrameError::Size(..))));
}

#[test]
fn enumeration_is_exhaustive_up_to_isomorphism() {
    // Separated incidences on 2+2 points up to renaming.
    assert!(!incidences(2, 2).is_empty());
    let total = count(2, 2, Uses { dia: true, ..Uses::default() });
    let seen = std::sync::atomic::AtomicUsize::new(0);
    let none: Option<()> = search(2, 2, Uses { dia: true, ..Uses::default() }, |f| {
        assert!(f.validate().is_ok());
        seen.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        None
    });
    assert!(none.is_none());
    assert_eq!(seen.into_inner(), total);
    // Search returns the first hit in enumeration order, independent of scheduling.
    let first = |_: ()| search_up_to(3, 3, Uses { boxr: true, ..Uses::default() }, |f| (f.r_box.iter().any(|&r| r != 0)).then(|| (f.i.clone(), f.r_box.clone())));
    assert_eq!(first(()), first(()));
}

fn compiled_correspondent(src: &str, t: Thread) -> (dfml_core::syntax::Sequent, Sort, Fo) {
    let s = parse_sequent(src).unwrap();
    let cls = classify(&s, DEFAULT_MAX_NODES).unwrap();
    let sys = cls.thread(t).unwrap().canonical().unwrap().clone();
    let c = correspond_system(&sys, Options::default()).unwrap();
    (s, c.anchor.sort, c.formula)
}

#[test]
fn oracle_confirms_a_correspondent_and_refutes_its_negation() {
    let (s, at, f) = compiled_correspondent("box p |- p", Thread::Translation);
    let x = dfml_core::syntax::anchor(at);
    let good = Compiled::new(&f, std::slice::from_ref(&x), &[]).unwrap();
    let v = verify_enumerated(&s, at, &good, 2, 2, false);
    assert!(v.agrees());
    assert!(v.frames > 0 && v.points >= v.frames);
    let bad = Compiled::new(&Fo::not(f), std::slice::from_ref(&x), &[]).unwrap();
    let w = verify_enumerated(&s, at, &bad, 2, 2, false).witness.expect("negation must disagree");
    let valid = valid_points(&w.frame, &s, at) >> w.point & 1 == 1;
    assert_eq!(valid, w.sequent_holds);
    assert_ne!(bad.eval_points(&w.frame) >> w.point & 1 == 1, valid);
    let listed = verify_frames(&s, at, &bad, std::slice::from_ref(&w.frame), false);
    assert!(!listed.agrees());
}

#[test]
fn local_validity_at_the_dual_sort() {
    let (s, at, f) = compiled_correspondent("dia dia p |- dia p", Thread::CoTranslation);
    assert_eq!(at, Sort::Dual);
    let x = dfml_core::syntax::anchor(at);
    let c = Compiled::new(&f, std::slice::from_ref(&x), &[]).unwrap();
    assert!(verify_enumerated(&s, at, &c, 2, 3, false).agrees());
    // A reflexive point validates box p |- p.
    let f = Frame::new(1, 1, vec![1], vec![0], vec![1], vec![0], vec![vec![0]]).unwrap();
    let s = parse_sequent("box p |- p").unwrap();
    assert_eq!(valid_points(&f, &s, Sort::One), 1);
    assert!(has(valid_points(&f, &s, Sort::Dual), 0));
}
