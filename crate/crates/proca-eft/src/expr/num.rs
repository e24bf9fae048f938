//! Exact numeric types shared by the expression engine.
//!
//! Coefficients are `Ratio<i128>`; exponents of symbolic scalars are
//! `Ratio<i32>` because canonical normalization introduces half-integer
//! powers. No floating point is used anywhere in the core.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Coefficient rational.
pub type Q = Ratio<i128>;
/// Exponent rational (small, often half-integer).
pub type Qe = Ratio<i32>;

pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Ratio::from_integer(n)
}

pub fn qe(n: i32, d: i32) -> Qe {
    Ratio::new(n, d)
}

pub fn qei(n: i32) -> Qe {
    Ratio::from_integer(n)
}

/// Formats an exponent rational as `n` or `n/d` for the textual format.
pub fn fmt_qe(x: Qe) -> String {
    if x.denom() == &1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` exponents.
pub fn parse_qe(s: &str) -> Option<Qe> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i32 = a.parse().ok()?;
            let d: i32 = b.parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => {
            let n: i32 = s.parse().ok()?;
            Some(Ratio::from_integer(n))
        }
    }
}

/// Truncated power series in the dimensional-regularization parameter,
/// `c0 + c1 eps + c2 eps^2`. Two orders past the constant term suffice
/// because amplitudes in this crate carry at most a simple `1/eps` pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeries {
    pub c: [Q; 3],
}

impl EpsSeries {
    pub fn zero() -> Self {
        EpsSeries { c: [Q::zero(), Q::zero(), Q::zero()] }
    }

    pub fn one() -> Self {
        EpsSeries { c: [Q::one(), Q::zero(), Q::zero()] }
    }

    pub fn constant(c0: Q) -> Self {
        EpsSeries { c: [c0, Q::zero(), Q::zero()] }
    }

    /// The series `a + b eps`.
    pub fn linear(a: Q, b: Q) -> Self {
        EpsSeries { c: [a, b, Q::zero()] }
    }

    pub fn add(&self, o: &EpsSeries) -> EpsSeries {
        EpsSeries { c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]] }
    }

    pub fn mul(&self, o: &EpsSeries) -> EpsSeries {
        EpsSeries {
            c: [
                self.c[0] * o.c[0],
                self.c[0] * o.c[1] + self.c[1] * o.c[0],
                self.c[0] * o.c[2] + self.c[1] * o.c[1] + self.c[2] * o.c[0],
            ],
        }
    }

    pub fn scale(&self, k: Q) -> EpsSeries {
        EpsSeries { c: [self.c[0] * k, self.c[1] * k, self.c[2] * k] }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> EpsSeries {
        assert!(!self.c[0].is_zero(), "eps-series inverse with vanishing constant term");
        let a = self.c[1] / self.c[0];
        let b = self.c[2] / self.c[0];
        EpsSeries { c: [Q::one(), -a, a * a - b] }.scale(self.c[0].recip())
    }

    pub fn powi(&self, e: i32) -> EpsSeries {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = EpsSeries::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

/// Exact integer power of a rational, with negative exponents allowed.
pub fn q_powi(b: Q, e: i32) -> Q {
    assert!(e >= 0 || !b.is_zero(), "zero base with negative exponent");
    let mut acc = Q::one();
    let pb = if e < 0 { b.recip() } else { b };
    for _ in 0..e.unsigned_abs() {
        acc *= pb;
    }
    acc
}

/// Signed formatting helper used by reports: `3` or `-1/2`.
pub fn fmt_q(x: Q) -> String {
    if x.denom() == &1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_abs(x: Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_series_inverse() {
        // (2 - 2 eps)^(-1) = 1/2 + eps/2 + eps^2/2
        let s = EpsSeries::linear(qi(2), qi(-2));
        let i = s.inv();
        assert_eq!(i.c, [q(1, 2), q(1, 2), q(1, 2)]);
        let prod = s.mul(&i);
        assert_eq!(prod, EpsSeries::one());
    }

    #[test]
    fn eps_series_powers() {
        // (4 - 2 eps)^2 = 16 - 16 eps + 4 eps^2
        let d = EpsSeries::linear(qi(4), qi(-2));
        assert_eq!(d.powi(2).c, [qi(16), qi(-16), qi(4)]);
        assert_eq!(d.powi(-1).mul(&d), EpsSeries::one());
    }
}
