use super::frame::{Frame, Mask};
use crate::syntax::sorted::{Bin, Un, View};
use crate::syntax::{Dfml, Sf, Sort};

/// Valuations map variable indices to subsets of the carrier of the
/// variable's sort.
pub type Valuation = [Mask];

/// Extension of a DfML formula: the set of sort-1 points satisfying it,
/// computed clause by clause from the (co)satisfaction relation.
pub fn eval_dfml(f: &Frame, phi: &Dfml, val: &Valuation) -> Mask {
    match phi {
        Dfml::Var(i) => val[*i as usize],
        Dfml::Top => f.full1(),
        Dfml::Bot => f.polard(f.fulld()),
        Dfml::And(a, b) => eval_dfml(f, a, val) & eval_dfml(f, b, val),
        Dfml::Or(a, b) => {
            let co = cosat(f, a, val) & cosat(f, b, val);
            f.polard(co)
        }
        Dfml::Box(a) => {
            let ext = eval_dfml(f, a, val);
            (0..f.n1).filter(|&x| f.d.box_dd[x] & !ext == 0).fold(0, |m, x| m | 1 << x)
        }
        Dfml::Dia(a) => {
            let co_a = cosat(f, a, val);
            let co = (0..f.nd).filter(|&y| f.d.dia_dd[y] & !co_a == 0).fold(0, |m, y| m | 1 << y);
            f.polard(co)
        }
        Dfml::Neg(a) => {
            let co_a = cosat(f, a, val);
            (0..f.n1).filter(|&x| f.d.neg_dd[x] & !co_a == 0).fold(0, |m, x| m | 1 << x)
        }
        Dfml::Imp(a, b) => {
            let (ea, eb) = (eval_dfml(f, a, val), eval_dfml(f, b, val));
            f.rspoon(ea, eb)
        }
    }
}

/// Co-extension: the sort-∂ points co-satisfying the formula.
pub fn cosat(f: &Frame, phi: &Dfml, val: &Valuation) -> Mask {
    f.polar1(eval_dfml(f, phi, val))
}

/// Extension of a sorted formula.
pub fn eval_sf(f: &Frame, a: &Sf, val: &Valuation) -> Mask {
    match a.view() {
        View::Var(v) => val[v.idx as usize],
        View::Top(s) => super::frame::full(f.size(s)),
        View::Bot(_) => 0,
        View::Un(op, x) => {
            let m = eval_sf(f, x, val);
            match op {
                Un::Prime => f.polar(x.sort(), m),
                Un::DiaV => f.diav(m),
                Un::DiaM => f.diam(m),
                Un::Box1 => f.box1(m),
                Un::BoxD => f.boxd(m),
                Un::BoxM => f.boxm(m),
                Un::BoxV => f.boxv(m),
                Un::TDown => f.tdown(m),
                Un::BTDown => f.btdown(m),
            }
        }
        View::Bin(op, x, y) => {
            let (mx, my) = (eval_sf(f, x, val), eval_sf(f, y, val));
            match op {
                Bin::Cap => mx & my,
                Bin::Cup => mx | my,
                Bin::Odot => f.odot(mx, my),
                Bin::RSpoon => f.rspoon(mx, my),
                Bin::TRight => f.tright(mx, my),
            }
        }
    }
}

/// All valuations of `vars` (index, sort) in which variable `k` ranges over
/// `domain(k)`. Calls `visit` with a dense valuation vector.
pub fn for_each_valuation(
    width: usize,
    vars: &[(u32, Vec<Mask>)],
    mut visit: impl FnMut(&[Mask]) -> bool,
) -> bool {
    let mut val = vec![0; width];
    fn go(k: usize, vars: &[(u32, Vec<Mask>)], val: &mut Vec<Mask>, visit: &mut dyn FnMut(&[Mask]) -> bool) -> bool {
        if k == vars.len() {
            return visit(val);
        }
        let (idx, dom) = &vars[k];
        for &m in dom {
            val[*idx as usize] = m;
            if !go(k + 1, vars, val, visit) {
                return false;
            }
        }
        true
    }
    go(0, vars, &mut val, &mut visit)
}

/// Every subset of the carrier of `s`.
pub fn all_subsets(f: &Frame, s: Sort) -> Vec<Mask> {
    (0..=super::frame::full(f.size(s))).collect()
}
