//! Scalar substitutions: scale redefinitions and the dimreg pole part.

use super::factor::{Factor, Head};
use super::mono::Expr;
use super::num::{EpsSeries, Q};
use super::sym::{ScalMono, Sym};
use num_traits::Zero;

/// Replaces `s^e` by `repl^e` in every monomial. The replacement must be a
/// pure scalar monomial (unit coefficient), which is exactly what scale
/// redefinitions like `lam2 -> lam3^(3/2) m^(-1/2)` need.
pub fn subst_scal_sym(e: &Expr, s: Sym, repl: &ScalMono) -> Expr {
    e.map_monos(|m| {
        let mut m2 = m.clone();
        let ex = m2.scal.take_sym(s);
        if !ex.is_zero() {
            m2.scal = m2.scal.mul(&repl.pow(ex));
        }
        m2
    })
}

/// Substitutes the symbolic dimension tokens `d + 2k -> (4 + 2k) - 2 eps`
/// and keeps the coefficient of `eps^-1`. The output carries an explicit
/// `eps^-1`; finite and higher-order pieces are dropped. Exponents of the
/// dimension tokens and of `eps` must be integers with `eps` powers in
/// {0, -1, -2}.
pub fn dimreg_pole_part(e: &Expr) -> Expr {
    let mut terms = Vec::new();
    for m in &e.terms {
        let mut m2 = m.clone();
        let mut series = EpsSeries::one();
        loop {
            let dp = m2.scal.iter().find_map(|(s, _)| match s {
                Sym::Dp(k) => Some(*k),
                _ => None,
            });
            let Some(k) = dp else { break };
            let ex = m2.scal.take_sym(Sym::Dp(k));
            assert!(ex.denom() == &1, "fractional power of a dimension token");
            series = series.mul(
                &EpsSeries::linear(Q::from_integer(4 + 2 * k as i128), Q::from_integer(-2))
                    .powi(*ex.numer()),
            );
        }
        let eps_pow = m2.scal.take_sym(Sym::Eps);
        assert!(eps_pow.denom() == &1, "fractional power of eps");
        let e0 = *eps_pow.numer();
        assert!((-2..=0).contains(&e0), "unexpected eps power {e0}");
        // total eps power must come out to -1: pick series order -1 - e0
        let j = (-1 - e0) as usize;
        if j >= 3 {
            continue;
        }
        let c = series.c[j];
        if c.is_zero() {
            continue;
        }
        m2.coef *= c;
        m2.scal.mul_sym(Sym::Eps, super::num::qei(-1));
        terms.push(m2);
    }
    Expr::from_monos(terms).canon()
}

/// Evaluates every symbolic dimension token at exactly four spacetime
/// dimensions: `(d + 2k)^e -> (4 + 2k)^e` folded into the coefficient.
/// Exponents must be integers, and `d - 4` itself must not appear with a
/// negative power.
pub fn dim_to_four(e: &Expr) -> Expr {
    let terms = e
        .terms
        .iter()
        .filter_map(|m| {
            let mut m2 = m.clone();
            loop {
                let dp = m2.scal.iter().find_map(|(s, _)| match s {
                    Sym::Dp(k) => Some(*k),
                    _ => None,
                });
                let Some(k) = dp else { break };
                let ex = m2.scal.take_sym(Sym::Dp(k));
                assert!(ex.denom() == &1, "fractional power of a dimension token");
                let base = Q::from_integer(4 + 2 * k as i128);
                let p = *ex.numer();
                if base.is_zero() {
                    assert!(p > 0, "negative power of d - 4 at d = 4");
                    return None;
                }
                m2.coef *= num_traits::Pow::pow(base, p);
            }
            Some(m2)
        })
        .collect();
    Expr::from_monos(terms).canon()
}

/// Drops every monomial carrying the given symbol (any nonzero power).
pub fn drop_sym(e: &Expr, s: Sym) -> Expr {
    Expr::from_monos(
        e.terms.iter().filter(|m| m.scal.exp_of(s).is_zero()).cloned().collect(),
    )
}

/// Splits off the coefficient expression of `s^p` (monomials whose power of
/// `s` is exactly `p`, with that power removed).
pub fn coeff_of_sym(e: &Expr, s: Sym, p: super::num::Qe) -> Expr {
    let mut terms = Vec::new();
    for m in &e.terms {
        if m.scal.exp_of(s) == p {
            let mut m2 = m.clone();
            m2.scal.take_sym(s);
            terms.push(m2);
        }
    }
    Expr::from_monos(terms)
}

/// One branch of a field replacement: rational and scalar weights times a
/// replacement factor. `factor: None` encodes a constant branch, which is
/// only legal when the replaced factor carries no indices (otherwise its
/// bond partners would dangle).
#[derive(Clone, Debug)]
pub struct HeadBranch {
    pub coef: Q,
    pub scal: ScalMono,
    pub factor: Option<Factor>,
}

impl HeadBranch {
    pub fn unit(factor: Factor) -> Self {
        HeadBranch { coef: Q::from_integer(1), scal: ScalMono::one(), factor: Some(factor) }
    }
}

/// Replaces every factor carrying `head` by the sum of branches `rep`
/// returns for it, expanding products multilinearly. Branches should build
/// their replacement factors out of the original factor's own index labels
/// (slots and derivatives may be recombined freely); labels invented inside
/// `rep` would collide with bonds already present in the monomial.
///
/// The result is returned raw; callers canonicalize.
pub fn subst_head(e: &Expr, head: Head, rep: &dyn Fn(&Factor) -> Vec<HeadBranch>) -> Expr {
    let mut out = Vec::new();
    for m in &e.terms {
        let hits: Vec<usize> =
            (0..m.facs.len()).filter(|&i| m.facs[i].head == head).collect();
        if hits.is_empty() {
            out.push(m.clone());
            continue;
        }
        let choices: Vec<Vec<HeadBranch>> = hits.iter().map(|&i| rep(&m.facs[i])).collect();
        let mut picks = vec![0usize; hits.len()];
        'outer: loop {
            let mut m2 = m.clone();
            m2.facs.clear();
            let mut keep = true;
            for (pos, f) in m.facs.iter().enumerate() {
                match hits.iter().position(|&h| h == pos) {
                    None => m2.facs.push(f.clone()),
                    Some(slot) => {
                        let b = &choices[slot][picks[slot]];
                        debug_assert!(
                            b.factor.is_some() || f.indices().next().is_none(),
                            "constant branch for an indexed factor"
                        );
                        m2.coef *= b.coef;
                        m2.scal = m2.scal.mul(&b.scal);
                        match &b.factor {
                            Some(rf) => m2.facs.push(rf.clone()),
                            None => {}
                        }
                    }
                }
            }
            if m2.coef.is_zero() {
                keep = false;
            }
            if keep {
                out.push(m2);
            }
            // odometer over the branch choices
            for slot in 0..picks.len() {
                picks[slot] += 1;
                if picks[slot] < choices[slot].len() {
                    continue 'outer;
                }
                picks[slot] = 0;
            }
            break;
        }
    }
    Expr::from_monos(out)
}
