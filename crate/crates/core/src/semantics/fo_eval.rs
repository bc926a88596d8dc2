use super::frame::{has, Frame, Mask};
use crate::syntax::fo::{Fo, Ivar, Letter, Rel};
use crate::syntax::{SVar, Sort};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("free variable `{0}` has no value")]
    Unbound(String),
    #[error("free predicate `{0}` has no value")]
    UnboundPred(String),
}

#[derive(Clone, Copy, Debug)]
enum RelK {
    I,
    Dia,
    Box,
    Neg,
    T,
    DiaP,
    BoxP,
    NegP,
    TP,
    DiaDD,
    BoxDD,
    NegDD,
    R111,
    Word(usize),
}

#[derive(Clone, Debug)]
enum Node {
    True,
    False,
    Rel(RelK, [usize; 3]),
    Eq(usize, usize),
    Leq(Sort, usize, usize),
    Pred(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    All(usize, Sort, Box<Node>),
    Ex(usize, Sort, Box<Node>),
    All2(usize, Sort, Box<Node>),
}

/// A first-order formula with variables resolved to slots, ready to be
/// evaluated repeatedly on many frames.
#[derive(Clone, Debug)]
pub struct Compiled {
    node: Node,
    slots: usize,
    pred_slots: usize,
    words: Vec<Vec<Letter>>,
    free: Vec<Ivar>,
    free_preds: Vec<SVar>,
}

struct Ctx {
    scope: Vec<(Ivar, usize)>,
    pscope: Vec<(SVar, usize)>,
    slots: usize,
    pred_slots: usize,
    words: Vec<Vec<Letter>>,
}

impl Ctx {
    fn var(&self, v: &Ivar) -> Result<usize, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| EvalError::Unbound(v.name.clone()))
    }

    fn compile(&mut self, f: &Fo) -> Result<Node, EvalError> {
        Ok(match f {
            Fo::True => Node::True,
            Fo::False => Node::False,
            Fo::Atom(r, args) => {
                let k = match r {
                    Rel::I => RelK::I,
                    Rel::Dia => RelK::Dia,
                    Rel::Box => RelK::Box,
                    Rel::Neg => RelK::Neg,
                    Rel::T => RelK::T,
                    Rel::DiaP => RelK::DiaP,
                    Rel::BoxP => RelK::BoxP,
                    Rel::NegP => RelK::NegP,
                    Rel::TP => RelK::TP,
                    Rel::DiaDD => RelK::DiaDD,
                    Rel::BoxDD => RelK::BoxDD,
                    Rel::NegDD => RelK::NegDD,
                    Rel::R111 => RelK::R111,
                    Rel::Word(w) => {
                        let pos = self.words.iter().position(|x| x == w).unwrap_or_else(|| {
                            self.words.push(w.clone());
                            self.words.len() - 1
                        });
                        RelK::Word(pos)
                    }
                };
                let mut s = [0; 3];
                for (k, a) in args.iter().enumerate() {
                    s[k] = self.var(a)?;
                }
                Node::Rel(k, s)
            }
            Fo::Eq(a, b) => Node::Eq(self.var(a)?, self.var(b)?),
            Fo::Leq(a, b) => Node::Leq(a.sort, self.var(a)?, self.var(b)?),
            Fo::Pred(p, a) => {
                let ps = self
                    .pscope
                    .iter()
                    .rev()
                    .find(|(q, _)| q == p)
                    .map(|(_, s)| *s)
                    .ok_or_else(|| EvalError::UnboundPred(p.to_string()))?;
                Node::Pred(ps, self.var(a)?)
            }
            Fo::Not(a) => Node::Not(Box::new(self.compile(a)?)),
            Fo::And(a, b) => Node::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Fo::Or(a, b) => Node::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Fo::Imp(a, b) => Node::Imp(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Fo::Forall(v, a) | Fo::Exists(v, a) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let body = Box::new(self.compile(a)?);
                self.scope.pop();
                if matches!(f, Fo::Forall(..)) {
                    Node::All(slot, v.sort, body)
                } else {
                    Node::Ex(slot, v.sort, body)
                }
            }
            Fo::Forall2(p, a) => {
                let slot = self.pred_slots;
                self.pred_slots += 1;
                self.pscope.push((*p, slot));
                let body = Box::new(self.compile(a)?);
                self.pscope.pop();
                Node::All2(slot, p.sort, body)
            }
        })
    }
}

struct Env<'a> {
    f: &'a Frame,
    words: Vec<Vec<Mask>>,
    asg: Vec<usize>,
    preds: Vec<Mask>,
}

impl Env<'_> {
    fn rel(&self, k: RelK, s: &[usize; 3]) -> bool {
        let d = &self.f.d;
        let a = |i: usize| self.asg[s[i]];
        match k {
            RelK::I => has(self.f.i[a(0)], a(1)),
            RelK::Dia => has(self.f.r_dia[a(0)], a(1)),
            RelK::Box => has(self.f.r_box[a(0)], a(1)),
            RelK::Neg => has(self.f.r_neg[a(0)], a(1)),
            RelK::T => has(self.f.t[a(0)][a(1)], a(2)),
            RelK::DiaP => has(d.dia_p[a(0)], a(1)),
            RelK::BoxP => has(d.box_p[a(0)], a(1)),
            RelK::NegP => has(d.neg_p[a(0)], a(1)),
            RelK::TP => has(d.tp[a(0)][a(1)], a(2)),
            RelK::DiaDD => has(d.dia_dd[a(0)], a(1)),
            RelK::BoxDD => has(d.box_dd[a(0)], a(1)),
            RelK::NegDD => has(d.neg_dd[a(0)], a(1)),
            RelK::R111 => has(d.r111[a(1)][a(2)], a(0)),
            RelK::Word(w) => has(self.words[w][a(0)], a(1)),
        }
    }

    fn eval(&mut self, n: &Node) -> bool {
        match n {
            Node::True => true,
            Node::False => false,
            Node::Rel(k, s) => self.rel(*k, s),
            Node::Eq(a, b) => self.asg[*a] == self.asg[*b],
            Node::Leq(s, a, b) => has(self.f.leq(*s)[self.asg[*a]], self.asg[*b]),
            Node::Pred(p, a) => has(self.preds[*p], self.asg[*a]),
            Node::Not(a) => !self.eval(a),
            Node::And(a, b) => self.eval(a) && self.eval(b),
            Node::Or(a, b) => self.eval(a) || self.eval(b),
            Node::Imp(a, b) => !self.eval(a) || self.eval(b),
            Node::All(slot, s, body) => (0..self.f.size(*s)).all(|e| {
                self.asg[*slot] = e;
                self.eval(body)
            }),
            Node::Ex(slot, s, body) => (0..self.f.size(*s)).any(|e| {
                self.asg[*slot] = e;
                self.eval(body)
            }),
            Node::All2(slot, s, body) => (0..=super::frame::full(self.f.size(*s))).all(|m| {
                self.preds[*slot] = m;
                self.eval(body)
            }),
        }
    }
}

impl Compiled {
    /// Compiles `f` with the given free individual and predicate variables.
    pub fn new(f: &Fo, free: &[Ivar], free_preds: &[SVar]) -> Result<Compiled, EvalError> {
        let mut ctx = Ctx {
            scope: free.iter().cloned().zip(0..).collect(),
            pscope: free_preds.iter().copied().zip(0..).collect(),
            slots: free.len(),
            pred_slots: free_preds.len(),
            words: Vec::new(),
        };
        let node = ctx.compile(f)?;
        Ok(Compiled {
            node,
            slots: ctx.slots,
            pred_slots: ctx.pred_slots,
            words: ctx.words,
            free: free.to_vec(),
            free_preds: free_preds.to_vec(),
        })
    }

    pub fn free(&self) -> &[Ivar] {
        &self.free
    }

    pub fn free_preds(&self) -> &[SVar] {
        &self.free_preds
    }

    /// Evaluates with free variables bound positionally.
    pub fn eval(&self, f: &Frame, values: &[usize], preds: &[Mask]) -> bool {
        let mut env = self.env(f);
        env.asg[..values.len()].copy_from_slice(values);
        env.preds[..preds.len()].copy_from_slice(preds);
        env.eval(&self.node)
    }

    /// Evaluates at every point of the sort of the single free variable.
    pub fn eval_points(&self, f: &Frame) -> Mask {
        let s = self.free[0].sort;
        let mut env = self.env(f);
        (0..f.size(s)).fold(0, |m, p| {
            env.asg[0] = p;
            if env.eval(&self.node) {
                m | 1 << p
            } else {
                m
            }
        })
    }

    fn env<'a>(&self, f: &'a Frame) -> Env<'a> {
        Env {
            f,
            words: self.words.iter().map(|w| f.word_rows(w)).collect(),
            asg: vec![0; self.slots.max(1)],
            preds: vec![0; self.pred_slots.max(1)],
        }
    }
}

/// One-shot evaluation of `f` under an assignment of its free variables.
pub fn eval_fo(frame: &Frame, f: &Fo, asg: &[(Ivar, usize)], preds: &[(SVar, Mask)]) -> Result<bool, EvalError> {
    let free: Vec<Ivar> = asg.iter().map(|(v, _)| v.clone()).collect();
    let fp: Vec<SVar> = preds.iter().map(|(p, _)| *p).collect();
    let c = Compiled::new(f, &free, &fp)?;
    let vals: Vec<usize> = asg.iter().map(|(_, e)| *e).collect();
    let pv: Vec<Mask> = preds.iter().map(|(_, m)| *m).collect();
    Ok(c.eval(frame, &vals, &pv))
}
