//! Exact numeric evaluation of tensor expressions.
//!
//! The evaluator assigns deterministic pseudo-random rational values to
//! every field component (a field and each of its derivative orders are
//! independent symmetric tensors), uses the explicit 4x4 mostly-minus
//! metric, and contracts everything exactly. Scalar symbols other than the
//! dimension tokens and the imaginary unit are kept symbolic, so the result
//! is a map `scalar monomial -> free-component table -> complex rational`.
//!
//! Two expressions that are equal as tensors evaluate to identical maps;
//! this is the oracle behind the canonicalization and reduction tests.

use super::factor::{Factor, Head};
use super::index::{IName, Idx};
use super::mono::{Expr, Mono};
use super::num::{q_powi, Q};
use super::sym::{ScalMono, Sym};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Complex rational.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QC {
    pub re: Q,
    pub im: Q,
}

impl QC {
    pub fn zero() -> QC {
        QC { re: Q::zero(), im: Q::zero() }
    }

    pub fn one() -> QC {
        QC { re: Q::one(), im: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(self, o: QC) -> QC {
        QC { re: self.re + o.re, im: self.im + o.im }
    }

    pub fn mul(self, o: QC) -> QC {
        QC { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    pub fn scale(self, k: Q) -> QC {
        QC { re: self.re * k, im: self.im * k }
    }

    /// Multiplies by i^e.
    pub fn phase(self, e: i32) -> QC {
        match e.rem_euclid(4) {
            0 => self,
            1 => QC { re: -self.im, im: self.re },
            2 => QC { re: -self.re, im: -self.im },
            3 => QC { re: self.im, im: -self.re },
            _ => unreachable!(),
        }
    }
}

/// Deterministic evaluation environment. Component values depend only on
/// the seed and the component's identity, never on query order.
pub struct NumEnv {
    seed: u64,
}

impl NumEnv {
    pub fn new(seed: u64) -> NumEnv {
        NumEnv { seed }
    }

    /// Small nonzero-denominator rational derived from a stable hash.
    fn value(&self, tag: &[u8]) -> Q {
        let mut h = 0xcbf29ce484222325u64 ^ self.seed;
        for &b in tag {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        // splitmix finalizer
        h = (h ^ (h >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94d049bb133111eb);
        h ^= h >> 31;
        let num = (h % 19) as i128 - 9;
        let den = ((h >> 8) % 3) as i128 + 1;
        Q::new(num, den)
    }
}

pub type EvalResult = BTreeMap<ScalMono, BTreeMap<Vec<u8>, QC>>;

fn head_tag(h: Head) -> Vec<u8> {
    h.name().into_bytes()
}

/// All-up component value of one factor under a component assignment.
fn fac_value(env: &NumEnv, f: &Factor, comp: &dyn Fn(Idx) -> u8) -> Q {
    let slots: Vec<u8> = f.slots.iter().map(|i| comp(*i)).collect();
    let mut ders: Vec<u8> = f.ders.iter().map(|i| comp(*i)).collect();
    ders.sort();
    match f.head {
        Head::Eta => {
            if slots[0] == slots[1] {
                if slots[0] == 0 {
                    Q::one()
                } else {
                    -Q::one()
                }
            } else {
                Q::zero()
            }
        }
        Head::Lc => {
            // all-up components, eps^{0123} = +1
            let mut s = Q::one();
            for i in 0..4 {
                for j in i + 1..4 {
                    match slots[i].cmp(&slots[j]) {
                        std::cmp::Ordering::Equal => return Q::zero(),
                        std::cmp::Ordering::Greater => s = -s,
                        std::cmp::Ordering::Less => {}
                    }
                }
            }
            s
        }
        Head::FdA => {
            // composed from the vector field so the raw and expanded forms
            // evaluate identically
            let da = |slot: u8, extra: u8| -> Q {
                let mut dd = ders.clone();
                dd.push(extra);
                dd.sort();
                let mut tag = head_tag(Head::DA);
                tag.push(b';');
                tag.push(slot);
                tag.push(b'|');
                tag.extend_from_slice(&dd);
                env.value(&tag)
            };
            da(slots[1], slots[0]) - da(slots[0], slots[1])
        }
        Head::H | Head::PolH(_) => {
            let mut ss = slots.clone();
            ss.sort();
            let mut tag = head_tag(f.head);
            tag.push(b';');
            tag.extend_from_slice(&ss);
            tag.push(b'|');
            tag.extend_from_slice(&ders);
            env.value(&tag)
        }
        Head::DA | Head::Phi | Head::ABar | Head::Mom(_) | Head::LoopK | Head::Pol(_) => {
            let mut tag = head_tag(f.head);
            tag.push(b';');
            tag.extend_from_slice(&slots);
            tag.push(b'|');
            tag.extend_from_slice(&ders);
            env.value(&tag)
        }
        Head::Mark(_) => panic!("markers cannot be evaluated"),
    }
}

fn eval_mono(env: &NumEnv, m: &Mono, free_comp: &BTreeMap<Idx, u8>) -> (ScalMono, QC) {
    // Split the scalar monomial: dimension tokens and the imaginary unit
    // fold into the numeric value, the rest stays symbolic.
    let mut resid = ScalMono::one();
    let mut val = QC::one().scale(m.coef);
    for (s, e) in m.scal.iter() {
        match s {
            Sym::ImagI => {
                assert!(e.denom() == &1, "fractional power of i");
                val = val.phase(*e.numer());
            }
            Sym::Dp(k) => {
                assert!(e.denom() == &1, "fractional power of a dimension token");
                val = val.scale(q_powi(Q::from_integer(4 + 2 * (*k as i128)), *e.numer()));
            }
            _ => resid.mul_sym(*s, *e),
        }
    }

    // Collect bonds.
    let mut bonds: Vec<u32> = Vec::new();
    for f in &m.facs {
        for i in f.indices() {
            if let IName::Bond(b) = i.name {
                if !bonds.contains(&b) {
                    bonds.push(b);
                }
            }
        }
    }
    bonds.sort();
    assert!(bonds.len() <= 13, "too many contractions for the numeric oracle");

    let mut total = Q::zero();
    let n_assign = 4usize.pow(bonds.len() as u32);
    for a in 0..n_assign {
        let mut bc: BTreeMap<u32, u8> = BTreeMap::new();
        let mut acc = a;
        for &b in &bonds {
            bc.insert(b, (acc % 4) as u8);
            acc /= 4;
        }
        let comp = |i: Idx| -> u8 {
            match i.name {
                IName::Bond(b) => bc[&b],
                IName::Free(_) => free_comp[&i],
            }
        };
        let mut prod = Q::one();
        // Variance rule: values are stored all-up; every lower index
        // position multiplies by the metric sign of its component.
        for f in &m.facs {
            prod *= fac_value(env, f, &comp);
            if prod.is_zero() {
                break;
            }
            for i in f.indices() {
                if !i.up && comp(*i) != 0 {
                    prod = -prod;
                }
            }
        }
        total += prod;
    }
    (resid, val.scale(total))
}

/// Evaluates an expression. Free indices are enumerated over all component
/// assignments; the result maps residual scalar monomials to tables of
/// complex rationals keyed by the assignment (aligned with the sorted free
/// index list).
pub fn eval_expr(e: &Expr, env: &NumEnv) -> EvalResult {
    let mut frees: Vec<Idx> = Vec::new();
    for m in &e.terms {
        for i in m.free_indices() {
            if !frees.contains(&i) {
                frees.push(i);
            }
        }
    }
    frees.sort();
    assert!(frees.len() <= 6, "too many free indices for the numeric oracle");

    let mut out: EvalResult = BTreeMap::new();
    let n_assign = 4usize.pow(frees.len() as u32);
    for a in 0..n_assign {
        let mut fc: BTreeMap<Idx, u8> = BTreeMap::new();
        let mut key = Vec::with_capacity(frees.len());
        let mut acc = a;
        for &f in &frees {
            let c = (acc % 4) as u8;
            fc.insert(f, c);
            key.push(c);
            acc /= 4;
        }
        for m in &e.terms {
            let (resid, v) = eval_mono(env, m, &fc);
            if v.is_zero() {
                continue;
            }
            let slot = out.entry(resid).or_default().entry(key.clone()).or_insert_with(QC::zero);
            *slot = slot.add(v);
        }
    }
    // normalize: drop exact zeros
    out.retain(|_, table| {
        table.retain(|_, v| !v.is_zero());
        !table.is_empty()
    });
    out
}

/// Oracle equality: same evaluation under the given environment.
pub fn eval_eq(a: &Expr, b: &Expr, env: &NumEnv) -> bool {
    eval_expr(a, env) == eval_expr(b, env)
}
