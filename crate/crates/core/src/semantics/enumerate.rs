//! Exhaustive enumeration of small frames satisfying F1 and F2.
//!
//! Incidence relations are enumerated up to renaming of points: only the
//! representative whose rows are sorted and lexicographically least over
//! all column permutations is kept. Every frame is isomorphic to one whose
//! incidence is such a representative, and all properties checked here are
//! invariant under isomorphism. Modal relations are enumerated in full.

use itertools::Itertools;
use rayon::prelude::*;

use super::frame::{bits, full, has, Frame, Mask};
use crate::syntax::Sort;

/// Which modal relations may be non-empty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Uses {
    pub dia: bool,
    pub boxr: bool,
    pub neg: bool,
    pub t: bool,
}

impl Uses {
    pub fn all() -> Self {
        Uses {
            dia: true,
            boxr: true,
            neg: true,
            t: true,
        }
    }

    pub fn union(self, o: Uses) -> Uses {
        Uses {
            dia: self.dia || o.dia,
            boxr: self.boxr || o.boxr,
            neg: self.neg || o.neg,
            t: self.t || o.t,
        }
    }
}

fn permute_cols(row: Mask, perm: &[usize]) -> Mask {
    bits(row).fold(0, |m, c| m | 1 << perm[c])
}

/// Separated incidence relations of shape n1 × nd, one per isomorphism class.
pub fn incidences(n1: usize, nd: usize) -> Vec<Vec<Mask>> {
    let perms: Vec<Vec<usize>> = (0..nd).permutations(nd).collect();
    let rows = full(nd) as usize + 1;
    let mut out = Vec::new();
    for i in (0..n1).map(|_| 0..rows).multi_cartesian_product() {
        let i: Vec<Mask> = i.into_iter().map(|r| r as Mask).collect();
        if i.windows(2).any(|w| w[0] >= w[1]) {
            continue;
        }
        let f = Frame::bare(n1, nd, i.clone()).unwrap();
        if f.separated().is_err() {
            continue;
        }
        let canonical = perms.iter().all(|p| {
            let mut q: Vec<Mask> = i.iter().map(|&r| permute_cols(r, p)).collect();
            q.sort_unstable();
            q >= i
        });
        if canonical {
            out.push(i);
        }
    }
    out
}

/// Smooth candidates for each used relation over a fixed incidence.
struct Candidates {
    dia: Vec<Vec<Mask>>,
    boxr: Vec<Vec<Mask>>,
    neg: Vec<Vec<Mask>>,
    t: Vec<Vec<Vec<Mask>>>,
}

fn all_relations(rows: usize, cols: usize) -> Vec<Vec<Mask>> {
    let r = full(cols) as usize + 1;
    (0..rows)
        .map(|_| 0..r)
        .multi_cartesian_product()
        .map(|v| v.into_iter().map(|m| m as Mask).collect())
        .collect()
}

fn candidates(n1: usize, nd: usize, i: &[Mask], uses: Uses) -> Candidates {
    let base = Frame::bare(n1, nd, i.to_vec()).unwrap();
    let with = |edit: &dyn Fn(&mut Frame)| {
        let mut f = base.clone();
        edit(&mut f);
        Frame::new_unchecked(n1, nd, f.i, f.r_dia, f.r_box, f.r_neg, f.t).unwrap()
    };
    let dia = if uses.dia {
        all_relations(n1, n1)
            .into_iter()
            .filter(|r| with(&|f| f.r_dia = r.clone()).smooth_dia())
            .collect()
    } else {
        vec![vec![0; n1]]
    };
    let boxr = if uses.boxr {
        all_relations(nd, nd)
            .into_iter()
            .filter(|r| with(&|f| f.r_box = r.clone()).smooth_box())
            .collect()
    } else {
        vec![vec![0; nd]]
    };
    let neg = if uses.neg {
        all_relations(nd, n1)
            .into_iter()
            .filter(|r| with(&|f| f.r_neg = r.clone()).smooth_neg())
            .collect()
    } else {
        vec![vec![0; nd]]
    };
    let t = if uses.t { ternary(&base) } else { vec![vec![vec![0; n1]; nd]] };
    Candidates { dia, boxr, neg, t }
}

/// Candidate z-slices of a smooth ternary relation. A slice fixes T z v for
/// every v; the sections {v | x T' z v} depend on one slice only, the
/// sections {z | x T' z v} are checked when slices are assembled.
struct Slices {
    // slices[k][v] = T z v = {y | y T z v}
    slices: Vec<Vec<Mask>>,
    // polars[k][v] = (T z v)'
    polars: Vec<Vec<Mask>>,
}

fn slices(base: &Frame) -> Slices {
    let (n1, nd) = (base.n1, base.nd);
    let slices: Vec<Vec<Mask>> = all_relations(nd, nd)
        .into_iter()
        .filter(|slice| {
            (0..n1).all(|x| {
                let sec = (0..nd).filter(|&v| has(base.polard(slice[v]), x)).fold(0, |m, v| m | 1 << v);
                base.is_galois(Sort::Dual, sec)
            })
        })
        .collect();
    let polars = slices.iter().map(|s| s.iter().map(|&m| base.polard(m)).collect()).collect();
    Slices { slices, polars }
}

fn assemble(base: &Frame, s: &Slices, choice: &[usize]) -> Option<Vec<Vec<Mask>>> {
    let (n1, nd) = (base.n1, base.nd);
    let ok = (0..n1).all(|x| {
        (0..nd).all(|v| {
            let sec = (0..n1).filter(|&z| has(s.polars[choice[z]][v], x)).fold(0, |m, z| m | 1 << z);
            base.is_galois(Sort::One, sec)
        })
    });
    if !ok {
        return None;
    }
    let mut t = vec![vec![0; n1]; nd];
    for (z, &k) in choice.iter().enumerate() {
        for (v, &tzv) in s.slices[k].iter().enumerate() {
            for y in bits(tzv) {
                t[y][z] |= 1 << v;
            }
        }
    }
    Some(t)
}

/// Every smooth ternary relation over `base`.
fn ternary(base: &Frame) -> Vec<Vec<Vec<Mask>>> {
    let s = slices(base);
    (0..base.n1)
        .map(|_| 0..s.slices.len())
        .multi_cartesian_product()
        .filter_map(|choice| assemble(base, &s, &choice))
        .collect()
}

/// Number of frames visited by [`search`] for the given sizes.
pub fn count(n1: usize, nd: usize, uses: Uses) -> usize {
    incidences(n1, nd)
        .par_iter()
        .map(|i| {
            let c = candidates(n1, nd, i, uses);
            c.dia.len() * c.boxr.len() * c.neg.len() * c.t.len()
        })
        .sum()
}

/// Runs `probe` on every F1/F2 frame of the given sizes (modal relations
/// outside `uses` empty) and returns the first non-`None` result in enumeration order.
pub fn search<T: Send>(n1: usize, nd: usize, uses: Uses, probe: impl Fn(&Frame) -> Option<T> + Sync) -> Option<T> {
    incidences(n1, nd).par_iter().find_map_first(|i| {
        let c = candidates(n1, nd, i, uses);
        let combos = c.dia.len() * c.boxr.len() * c.neg.len() * c.t.len();
        (0..combos).into_par_iter().find_map_first(|k| {
            let (k, a) = (k / c.dia.len(), k % c.dia.len());
            let (k, b) = (k / c.boxr.len(), k % c.boxr.len());
            let (k, n) = (k / c.neg.len(), k % c.neg.len());
            let f = Frame::new_unchecked(
                n1,
                nd,
                i.clone(),
                c.dia[a].clone(),
                c.boxr[b].clone(),
                c.neg[n].clone(),
                c.t[k].clone(),
            )
            .unwrap();
            probe(&f)
        })
    })
}

/// [`search`] over every size pair up to the given bounds.
pub fn search_up_to<T: Send>(
    max1: usize,
    maxd: usize,
    uses: Uses,
    probe: impl Fn(&Frame) -> Option<T> + Sync,
) -> Option<T> {
    (1..=max1)
        .cartesian_product(1..=maxd)
        .find_map(|(n1, nd)| search(n1, nd, uses, &probe))
}

/// Attempts per sample at drawing a smooth ternary relation.
const T_ATTEMPTS: usize = 100_000;

/// Failed draws after which [`sample`] returns what it has.
const MAX_MISSES: usize = 64;

/// `k` frames of the given sizes drawn at random (with repetition) from
/// the F1/F2 frames: a uniform incidence representative, then uniform
/// smooth binary relations and a smooth ternary relation found by
/// rejection over independent slices. Deterministic in `seed`.
pub fn sample(n1: usize, nd: usize, uses: Uses, k: usize, seed: u64) -> Vec<Frame> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let incs = incidences(n1, nd);
    let no_t = Uses { t: false, ..uses };
    let pools: Vec<(Candidates, Option<Slices>)> = incs
        .iter()
        .map(|i| {
            let c = candidates(n1, nd, i, no_t);
            let s = uses.t.then(|| slices(&Frame::bare(n1, nd, i.clone()).unwrap()));
            (c, s)
        })
        .collect();
    let mut out = Vec::with_capacity(k);
    let mut misses = 0;
    while out.len() < k && misses < MAX_MISSES {
        let n = rng.gen_range(0..incs.len());
        let (c, s) = &pools[n];
        let t = match s {
            None => c.t[0].clone(),
            Some(s) if s.slices.is_empty() => {
                misses += 1;
                continue;
            }
            Some(s) => {
                let base = Frame::bare(n1, nd, incs[n].clone()).unwrap();
                let found = (0..T_ATTEMPTS).find_map(|_| {
                    let choice: Vec<usize> = (0..n1).map(|_| rng.gen_range(0..s.slices.len())).collect();
                    assemble(&base, s, &choice)
                });
                match found {
                    Some(t) => t,
                    None => {
                        misses += 1;
                        continue;
                    }
                }
            }
        };
        let pick = |v: &Vec<Vec<Mask>>, rng: &mut rand_chacha::ChaCha8Rng| v[rng.gen_range(0..v.len())].clone();
        let (d, b, g) = (pick(&c.dia, &mut rng), pick(&c.boxr, &mut rng), pick(&c.neg, &mut rng));
        out.push(Frame::new_unchecked(n1, nd, incs[n].clone(), d, b, g, t).unwrap());
    }
    out
}
