use crate::syntax::fo::Letter;
use crate::syntax::Sort;

/// Largest carrier (per sort) accepted by the evaluators.
pub const MAX_SORT_SIZE: usize = 5;

pub type Mask = u32;

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

pub fn has(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn full(n: usize) -> Mask {
    (1u32 << n) - 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("carrier sizes must be between 1 and {MAX_SORT_SIZE}, got {0} and {1}")]
    Size(usize, usize),
    #[error("relation {0} has the wrong shape")]
    Shape(&'static str),
    #[error("F1 fails: the order on sort {0} is not antisymmetric")]
    Separation(Sort),
    #[error("F2 fails: a section of {0} is not a Galois set")]
    Smoothness(&'static str),
}

/// A sorted residuated frame over Z1 = {0..n1} and Z∂ = {0..nd}, together
/// with every relation derived from it.
///
/// Base relations, stored as rows of bit masks:
/// `i[x]` = {y | x I y}, `r_dia[x]` = {z | x R◇ z}, `r_box[y]` = {v | y R□ v},
/// `r_neg[y]` = {x | y R∼ x}, `t[y][x]` = {v | y T x v}.
#[derive(Clone, Debug)]
pub struct Frame {
    pub n1: usize,
    pub nd: usize,
    pub i: Vec<Mask>,
    pub r_dia: Vec<Mask>,
    pub r_box: Vec<Mask>,
    pub r_neg: Vec<Mask>,
    pub t: Vec<Vec<Mask>>,
    pub d: Derived,
}

/// Relations derived from the base ones. Each row is indexed by the first
/// argument: `dia_p[y]` = {z | y R'◇ z}, `dia_dd[y]` = {v | y R''◇ v},
/// `box_p[x]` = {y | x R'□ y}, `box_dd[x]` = {z | x R''□ z},
/// `neg_p[z]` = {x | z R'∼ x}, `neg_dd[x]` = {y | x R''∼ y},
/// `tp[x][z]` = {v | x T' z v}, `r111[a][b]` = {w | w R¹¹¹ a b}.
#[derive(Clone, Debug, Default)]
pub struct Derived {
    pub i_col: Vec<Mask>,
    pub leq1: Vec<Mask>,
    pub leqd: Vec<Mask>,
    pub dia_p: Vec<Mask>,
    pub dia_dd: Vec<Mask>,
    pub box_p: Vec<Mask>,
    pub box_dd: Vec<Mask>,
    pub neg_p: Vec<Mask>,
    pub neg_dd: Vec<Mask>,
    pub tp: Vec<Vec<Mask>>,
    pub r111: Vec<Vec<Mask>>,
    pub stable1: Vec<Mask>,
    pub stabled: Vec<Mask>,
}

fn column(rows: &[Mask], j: usize) -> Mask {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| has(**r, j))
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

impl Frame {
    /// Builds a frame and checks F1 and F2.
    pub fn new(
        n1: usize,
        nd: usize,
        i: Vec<Mask>,
        r_dia: Vec<Mask>,
        r_box: Vec<Mask>,
        r_neg: Vec<Mask>,
        t: Vec<Vec<Mask>>,
    ) -> Result<Frame, FrameError> {
        let f = Self::new_unchecked(n1, nd, i, r_dia, r_box, r_neg, t)?;
        f.validate()?;
        Ok(f)
    }

    /// Builds a frame checking only sizes and shapes.
    pub fn new_unchecked(
        n1: usize,
        nd: usize,
        i: Vec<Mask>,
        r_dia: Vec<Mask>,
        r_box: Vec<Mask>,
        r_neg: Vec<Mask>,
        t: Vec<Vec<Mask>>,
    ) -> Result<Frame, FrameError> {
        if !(1..=MAX_SORT_SIZE).contains(&n1) || !(1..=MAX_SORT_SIZE).contains(&nd) {
            return Err(FrameError::Size(n1, nd));
        }
        let (f1, fd) = (full(n1), full(nd));
        let ok = |rows: &[Mask], n: usize, within: Mask| rows.len() == n && rows.iter().all(|r| r & !within == 0);
        if !ok(&i, n1, fd) {
            return Err(FrameError::Shape("I"));
        }
        if !ok(&r_dia, n1, f1) {
            return Err(FrameError::Shape("R_dia"));
        }
        if !ok(&r_box, nd, fd) {
            return Err(FrameError::Shape("R_box"));
        }
        if !ok(&r_neg, nd, f1) {
            return Err(FrameError::Shape("R_neg"));
        }
        if t.len() != nd || !t.iter().all(|row| ok(row, n1, fd)) {
            return Err(FrameError::Shape("T"));
        }
        let mut f = Frame {
            n1,
            nd,
            i,
            r_dia,
            r_box,
            r_neg,
            t,
            d: Derived::default(),
        };
        f.derive();
        Ok(f)
    }

    /// A frame with the given incidence and empty modal relations.
    pub fn bare(n1: usize, nd: usize, i: Vec<Mask>) -> Result<Frame, FrameError> {
        Self::new_unchecked(n1, nd, i, vec![0; n1], vec![0; nd], vec![0; nd], vec![vec![0; n1]; nd])
    }

    pub fn full1(&self) -> Mask {
        full(self.n1)
    }

    pub fn fulld(&self) -> Mask {
        full(self.nd)
    }

    pub fn size(&self, s: Sort) -> usize {
        match s {
            Sort::One => self.n1,
            Sort::Dual => self.nd,
        }
    }

    /// U' = {y | no u in U has u I y}.
    pub fn polar1(&self, u: Mask) -> Mask {
        let hit = bits(u).fold(0, |acc, x| acc | self.i[x]);
        self.fulld() & !hit
    }

    /// V' = {x | x I v for no v in V}.
    pub fn polard(&self, v: Mask) -> Mask {
        (0..self.n1).filter(|&x| self.i[x] & v == 0).fold(0, |acc, x| acc | 1 << x)
    }

    pub fn polar(&self, s: Sort, m: Mask) -> Mask {
        match s {
            Sort::One => self.polar1(m),
            Sort::Dual => self.polard(m),
        }
    }

    pub fn closure(&self, s: Sort, m: Mask) -> Mask {
        self.polar(s.flip(), self.polar(s, m))
    }

    pub fn is_galois(&self, s: Sort, m: Mask) -> bool {
        self.closure(s, m) == m
    }

    pub fn stable_sets(&self, s: Sort) -> &[Mask] {
        match s {
            Sort::One => &self.d.stable1,
            Sort::Dual => &self.d.stabled,
        }
    }

    pub fn leq(&self, s: Sort) -> &[Mask] {
        match s {
            Sort::One => &self.d.leq1,
            Sort::Dual => &self.d.leqd,
        }
    }

    fn derive(&mut self) {
        let (n1, nd) = (self.n1, self.nd);
        let i_col: Vec<Mask> = (0..nd).map(|y| column(&self.i, y)).collect();
        self.d.i_col = i_col;
        let leq1 = (0..n1).map(|u| self.closure(Sort::One, 1 << u)).collect();
        let leqd = (0..nd).map(|v| self.closure(Sort::Dual, 1 << v)).collect();

        // y R'◇ z iff y ∈ (R◇ z)' where R◇ z = {x | x R◇ z}.
        let dia_p_col: Vec<Mask> = (0..n1).map(|z| self.polar1(column(&self.r_dia, z))).collect();
        let dia_p: Vec<Mask> = (0..nd).map(|y| column(&dia_p_col, y)).collect();
        let dia_dd = dia_p.iter().map(|&m| self.polar1(m)).collect();

        // x R'□ y iff x ∈ '{v | v R□ y}.
        let box_p_col: Vec<Mask> = (0..nd).map(|y| self.polard(column(&self.r_box, y))).collect();
        let box_p: Vec<Mask> = (0..n1).map(|x| column(&box_p_col, x)).collect();
        let box_dd = box_p.iter().map(|&m| self.polard(m)).collect();

        // z R'∼ x iff z ∈ '{y | y R∼ x}.
        let neg_p_col: Vec<Mask> = (0..n1).map(|x| self.polard(column(&self.r_neg, x))).collect();
        let neg_p: Vec<Mask> = (0..n1).map(|z| column(&neg_p_col, z)).collect();
        let neg_dd = neg_p.iter().map(|&m| self.polar1(m)).collect();

        // x T' z v iff x ∈ '{y | y T z v}.
        let mut tp = vec![vec![0; n1]; n1];
        for z in 0..n1 {
            for v in 0..nd {
                let tzv = (0..nd).filter(|&y| has(self.t[y][z], v)).fold(0, |acc, y| acc | 1 << y);
                for x in bits(self.polard(tzv)) {
                    tp[x][z] |= 1 << v;
                }
            }
        }
        // w R¹¹¹ z x iff w ∈ '{v | x T' z v}.
        let r111 = (0..n1)
            .map(|z| (0..n1).map(|x| self.polard(tp[x][z])).collect())
            .collect();

        let stable1 = (0..=full(n1)).filter(|&m| self.is_galois(Sort::One, m)).collect();
        let stabled = (0..=full(nd)).filter(|&m| self.is_galois(Sort::Dual, m)).collect();
        self.d = Derived {
            i_col: std::mem::take(&mut self.d.i_col),
            leq1,
            leqd,
            dia_p,
            dia_dd,
            box_p,
            box_dd,
            neg_p,
            neg_dd,
            tp,
            r111,
            stable1,
            stabled,
        };
    }

    /// F1: the orders on both sorts are antisymmetric.
    pub fn separated(&self) -> Result<(), FrameError> {
        let distinct = |rows: &[Mask]| (0..rows.len()).all(|a| (0..a).all(|b| rows[a] != rows[b]));
        if !distinct(&self.i) {
            return Err(FrameError::Separation(Sort::One));
        }
        if !distinct(&self.d.i_col) {
            return Err(FrameError::Separation(Sort::Dual));
        }
        Ok(())
    }

    /// F2: every section of every Galois dual relation is a Galois set.
    pub fn smooth(&self) -> Result<(), FrameError> {
        if !self.smooth_dia() {
            return Err(FrameError::Smoothness("R_dia"));
        }
        if !self.smooth_box() {
            return Err(FrameError::Smoothness("R_box"));
        }
        if !self.smooth_neg() {
            return Err(FrameError::Smoothness("R_neg"));
        }
        if !self.smooth_t() {
            return Err(FrameError::Smoothness("T"));
        }
        Ok(())
    }

    pub fn smooth_dia(&self) -> bool {
        self.d.dia_p.iter().all(|&m| self.is_galois(Sort::One, m))
    }

    pub fn smooth_box(&self) -> bool {
        self.d.box_p.iter().all(|&m| self.is_galois(Sort::Dual, m))
    }

    pub fn smooth_neg(&self) -> bool {
        self.d.neg_p.iter().all(|&m| self.is_galois(Sort::One, m))
    }

    pub fn smooth_t(&self) -> bool {
        let tp = &self.d.tp;
        (0..self.n1).all(|x| {
            (0..self.n1).all(|z| self.is_galois(Sort::Dual, tp[x][z]))
                && (0..self.nd).all(|v| {
                    let sec = (0..self.n1).filter(|&z| has(tp[x][z], v)).fold(0, |acc, z| acc | 1 << z);
                    self.is_galois(Sort::One, sec)
                })
        })
    }

    pub fn validate(&self) -> Result<(), FrameError> {
        self.separated()?;
        self.smooth()
    }

    /// F0: every point is related by I to some point of the other sort.
    pub fn quasi_serial(&self) -> bool {
        self.i.iter().all(|&r| r != 0) && self.d.i_col.iter().all(|&c| c != 0)
    }

    /// F3: each base relation is increasing in its first argument and
    /// decreasing in the others.
    pub fn monotone(&self) -> bool {
        let (l1, ld) = (&self.d.leq1, &self.d.leqd);
        let binary = |rows: &[Mask], la: &[Mask], lb: &[Mask]| {
            (0..rows.len()).all(|a| {
                bits(rows[a]).all(|b| {
                    // a ≤ a2 implies a2 R b; b2 ≤ b implies a R b2.
                    bits(la[a]).all(|a2| has(rows[a2], b))
                        && (0..lb.len()).filter(|&b2| has(lb[b2], b)).all(|b2| has(rows[a], b2))
                })
            })
        };
        if !binary(&self.r_dia, l1, l1) || !binary(&self.r_box, ld, ld) || !binary(&self.r_neg, ld, l1) {
            return false;
        }
        (0..self.nd).all(|y| {
            (0..self.n1).all(|x| {
                bits(self.t[y][x]).all(|v| {
                    bits(ld[y]).all(|y2| has(self.t[y2][x], v))
                        && (0..self.n1).filter(|&x2| has(l1[x2], x)).all(|x2| has(self.t[y][x2], v))
                        && (0..self.nd).filter(|&v2| has(ld[v2], v)).all(|v2| has(self.t[y][x], v2))
                })
            })
        })
    }

    // Complex algebra. Image operators first, then the boxes.

    pub fn diav(&self, u: Mask) -> Mask {
        (0..self.n1).filter(|&x| self.r_dia[x] & u != 0).fold(0, |a, x| a | 1 << x)
    }

    pub fn diam(&self, v: Mask) -> Mask {
        (0..self.nd).filter(|&y| self.r_box[y] & v != 0).fold(0, |a, y| a | 1 << y)
    }

    pub fn tdown(&self, u: Mask) -> Mask {
        (0..self.nd).filter(|&y| self.r_neg[y] & u != 0).fold(0, |a, y| a | 1 << y)
    }

    pub fn tright(&self, u: Mask, v: Mask) -> Mask {
        (0..self.nd)
            .filter(|&y| bits(u).any(|x| self.t[y][x] & v != 0))
            .fold(0, |a, y| a | 1 << y)
    }

    pub fn odot(&self, a: Mask, c: Mask) -> Mask {
        let mut out = 0;
        for x in bits(a) {
            for z in bits(c) {
                out |= self.d.r111[x][z];
            }
        }
        out
    }

    /// {u | ∀x∀z (z R¹¹¹ x u ∧ x ∈ A → z ∈ C)}.
    pub fn rspoon(&self, a: Mask, c: Mask) -> Mask {
        let f1 = self.full1();
        (0..self.n1)
            .filter(|&u| bits(a).all(|x| self.d.r111[x][u] & !c & f1 == 0))
            .fold(0, |acc, u| acc | 1 << u)
    }

    /// {u | ∀z (z R◇ u → z ∈ A)}.
    pub fn box1(&self, a: Mask) -> Mask {
        (0..self.n1)
            .filter(|&u| (0..self.n1).all(|z| !has(self.r_dia[z], u) || has(a, z)))
            .fold(0, |acc, u| acc | 1 << u)
    }

    /// {v | ∀y (y R□ v → y ∈ B)}.
    pub fn boxd(&self, b: Mask) -> Mask {
        (0..self.nd)
            .filter(|&v| (0..self.nd).all(|y| !has(self.r_box[y], v) || has(b, y)))
            .fold(0, |acc, v| acc | 1 << v)
    }

    pub fn boxm(&self, a: Mask) -> Mask {
        (0..self.n1).filter(|&x| self.d.box_dd[x] & !a == 0).fold(0, |acc, x| acc | 1 << x)
    }

    pub fn boxv(&self, b: Mask) -> Mask {
        (0..self.nd).filter(|&y| self.d.dia_dd[y] & !b == 0).fold(0, |acc, y| acc | 1 << y)
    }

    pub fn btdown(&self, b: Mask) -> Mask {
        (0..self.n1).filter(|&x| self.d.neg_dd[x] & !b == 0).fold(0, |acc, x| acc | 1 << x)
    }

    /// Rows of the composition of double-dual relations along `word`.
    pub fn word_rows(&self, word: &[Letter]) -> Vec<Mask> {
        let rows = |l: Letter| -> &[Mask] {
            match l {
                Letter::M => &self.d.box_dd,
                Letter::Neg => &self.d.neg_dd,
                Letter::V => &self.d.dia_dd,
            }
        };
        let first = rows(word[0]).to_vec();
        word[1..].iter().fold(first, |acc, &l| {
            let r = rows(l);
            acc.iter().map(|&m| bits(m).fold(0, |a, k| a | r[k])).collect()
        })
    }
}
