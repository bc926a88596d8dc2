use std::sync::OnceLock;

use dfml_core::semantics::enumerate::{sample, Uses};
use dfml_core::semantics::frame::Mask;
use dfml_core::semantics::model::{cosat, eval_dfml, eval_sf, for_each_valuation};
use dfml_core::semantics::Frame;
use dfml_core::syntax::dfml::{parse_formula, parse_sequent};
use dfml_core::syntax::{sorted, Dfml, Sort};
use dfml_core::translation::{bullet, circle, translate, translate_thread, variants, Thread};
use proptest::prelude::*;

fn sf(src: &str, s: Sort) -> dfml_core::syntax::Sf {
    sorted::parse_formula(src, Some(s)).unwrap()
}

#[test]
fn primary_translations() {
    let cases = [
        ("p", "P0''"),
        ("dia p", "(diav P0'')''"),
        ("box p", "boxm P0''"),
        ("neg p", "(tdown P0'')'"),
        ("p -> q", "(P0'' tright P1')'"),
        (r"p \/ q", "(P0'' cup P1'')''"),
    ];
    for (src, b) in cases {
        let phi = parse_formula(src).unwrap();
        assert_eq!(bullet(&phi), sf(b, Sort::One), "bullet of {src}");
        assert_eq!(circle(&phi).sort(), Sort::Dual);
    }
}

#[test]
fn sequent_translation_sorts() {
    let s = parse_sequent("box p |- p").unwrap();
    let (t, c) = translate(&s);
    assert_eq!(t.sort(), Sort::One);
    assert_eq!(c.sort(), Sort::Dual);
    assert_eq!(translate_thread(&s, Thread::Translation), t);
    assert_eq!(translate_thread(&s, Thread::CoTranslation), c);
    assert_eq!(t.to_string(), "boxm P0'' |-1 P0''");
}

#[test]
fn variants_start_with_primary_and_are_distinct() {
    let s = parse_sequent(r"box (p \/ q) |- dia p \/ box q").unwrap();
    for t in [Thread::Translation, Thread::CoTranslation] {
        let vs = variants(&s, t);
        assert_eq!(vs[0], translate_thread(&s, t));
        let mut seen = vs.clone();
        seen.sort_by_key(|v| v.to_string());
        seen.dedup();
        assert_eq!(seen.len(), vs.len());
    }
}

#[test]
fn thread_names_parse() {
    for t in [Thread::Translation, Thread::CoTranslation] {
        assert_eq!(t.name().parse::<Thread>().unwrap(), t);
    }
    assert!("sideways".parse::<Thread>().is_err());
}

/// Quasi-serial frames with every relation in play.
fn frames() -> &'static [Frame] {
    static F: OnceLock<Vec<Frame>> = OnceLock::new();
    F.get_or_init(|| {
        let mut out = Vec::new();
        for (n1, nd, seed) in [(1, 1, 1), (2, 2, 2), (2, 3, 3), (3, 2, 4)] {
            out.extend(sample(n1, nd, Uses::all(), 12, seed).into_iter().filter(Frame::quasi_serial));
        }
        out
    })
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

fn each_stable_valuation(f: &Frame, mut visit: impl FnMut(&[Mask]) -> bool) -> bool {
    let dom = f.stable_sets(Sort::One).to_vec();
    for_each_valuation(2, &[(0, dom.clone()), (1, dom)], |v| visit(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// On F0 frames the extension of φ is that of φ• and its co-extension
    /// is that of φ∘, for every variant.
    #[test]
    fn full_abstraction(phi in dfml()) {
        prop_assert!(frames().len() >= 20, "{} frames", frames().len());
        let s = dfml_core::syntax::Sequent::new(phi.clone(), phi.clone());
        let bullets: Vec<_> = variants(&s, Thread::Translation).into_iter().map(|v| v.lhs).collect();
        let circles: Vec<_> = variants(&s, Thread::CoTranslation).into_iter().map(|v| v.rhs).collect();
        for f in frames() {
            let ok = each_stable_valuation(f, |val| {
                let (e, c) = (eval_dfml(f, &phi, val), cosat(f, &phi, val));
                bullets.iter().all(|b| eval_sf(f, b, val) == e) && circles.iter().all(|b| eval_sf(f, b, val) == c)
            });
            prop_assert!(ok, "{} on {:?}", phi, f.i);
        }
    }

    /// Extensions are Galois stable, co-extensions co-stable.
    #[test]
    fn extensions_are_stable(phi in dfml()) {
        for f in frames() {
            let ok = each_stable_valuation(f, |val| {
                f.is_galois(Sort::One, eval_dfml(f, &phi, val)) && f.is_galois(Sort::Dual, cosat(f, &phi, val))
            });
            prop_assert!(ok);
        }
    }
}

#[test]
fn bottom_needs_quasi_seriality() {
    // A sort-1 point related to nothing makes the closure of the empty set
    // nonempty, so bot and its translation come apart.
    let f = Frame::new(2, 1, vec![1, 0], vec![0, 0], vec![0], vec![0], vec![vec![0, 0]]).unwrap();
    assert!(!f.quasi_serial());
    let bot = Dfml::Bot;
    assert_ne!(eval_dfml(&f, &bot, &[]), eval_sf(&f, &bullet(&bot), &[]));
}
