//! Monomials and tensor expressions.

use super::factor::{Factor, Head};
use super::index::{IName, Idx};
use super::num::{Q, Qe};
use super::sym::ScalMono;
use num_traits::{One, Zero};

/// One monomial: rational coefficient, scalar monomial, tensor factors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono {
    pub coef: Q,
    pub scal: ScalMono,
    pub facs: Vec<Factor>,
}

impl Mono {
    pub fn new(coef: Q, scal: ScalMono, facs: Vec<Factor>) -> Mono {
        Mono { coef, scal, facs }
    }

    /// Pure scalar monomial (no tensor factors).
    pub fn scalar(coef: Q) -> Mono {
        Mono { coef, scal: ScalMono::one(), facs: Vec::new() }
    }

    pub fn one() -> Mono {
        Mono::scalar(Q::one())
    }

    pub fn max_bond_id(&self) -> Option<u32> {
        self.facs
            .iter()
            .flat_map(|f| f.indices())
            .filter_map(|i| match i.name {
                IName::Bond(b) => Some(b),
                IName::Free(_) => None,
            })
            .max()
    }

    pub fn shift_bonds(&mut self, offset: u32) {
        if offset == 0 {
            return;
        }
        for f in &mut self.facs {
            for i in f.indices_mut() {
                if let IName::Bond(b) = i.name {
                    i.name = IName::Bond(b + offset);
                }
            }
        }
    }

    /// Product of two monomials; bond ids of `other` are shifted to stay
    /// disjoint from ours.
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut rhs = other.clone();
        let off = self.max_bond_id().map(|b| b + 1).unwrap_or(0);
        rhs.shift_bonds(off);
        let mut facs = self.facs.clone();
        facs.extend(rhs.facs);
        Mono { coef: self.coef * rhs.coef, scal: self.scal.mul(&rhs.scal), facs }
    }

    /// Sorted multiset of free indices (with variance).
    pub fn free_indices(&self) -> Vec<Idx> {
        let mut v: Vec<Idx> = self
            .facs
            .iter()
            .flat_map(|f| f.indices())
            .filter(|i| !i.is_bond())
            .copied()
            .collect();
        v.sort();
        v
    }

    /// Mass dimension: scalar prefactor plus field/derivative/momentum
    /// content. Used by the Lagrangian dimension audit.
    pub fn mass_dim(&self) -> Qe {
        let mut d = self.scal.mass_dim();
        for f in &self.facs {
            let fd: i32 = match f.head {
                Head::H | Head::DA | Head::Phi | Head::ABar => 1,
                Head::FdA => 2,
                Head::Mom(_) | Head::LoopK => 1,
                _ => 0,
            };
            d += Qe::from_integer(fd + f.ders.len() as i32);
        }
        d
    }

    /// Bond ids must each occur exactly twice across all index positions.
    pub fn bonds_paired(&self) -> bool {
        let mut counts = std::collections::HashMap::new();
        for f in &self.facs {
            for i in f.indices() {
                if let IName::Bond(b) = i.name {
                    *counts.entry(b).or_insert(0u32) += 1;
                }
            }
        }
        counts.values().all(|&c| c == 2)
    }
}

/// Sum of monomials. Raw expressions may hold any well-formed monomials;
/// `canonical()` produces the sorted, merged normal form that all equality
/// tests rely on.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Expr {
    pub terms: Vec<Mono>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr { terms: Vec::new() }
    }

    pub fn from_monos(terms: Vec<Mono>) -> Expr {
        Expr { terms }
    }

    pub fn mono(m: Mono) -> Expr {
        Expr { terms: vec![m] }
    }

    pub fn scalar(c: Q) -> Expr {
        Expr::mono(Mono::scalar(c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Expr) -> Expr {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Expr { terms: t }
    }

    pub fn neg(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|m| Mono { coef: -m.coef, scal: m.scal.clone(), facs: m.facs.clone() })
                .collect(),
        }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                t.push(a.mul(b));
            }
        }
        Expr { terms: t }
    }

    pub fn scale(&self, k: Q) -> Expr {
        if k.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|m| Mono { coef: m.coef * k, scal: m.scal.clone(), facs: m.facs.clone() })
                .collect(),
        }
    }

    pub fn scale_scal(&self, s: &ScalMono) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|m| Mono { coef: m.coef, scal: m.scal.mul(s), facs: m.facs.clone() })
                .collect(),
        }
    }

    pub fn map_monos(&self, f: impl Fn(&Mono) -> Mono) -> Expr {
        Expr { terms: self.terms.iter().map(f).collect() }
    }

    /// If `self == k * reference` for a rational times a scalar monomial,
    /// returns that scale. Both expressions must live in the same canonical
    /// basis (e.g. both ibp normal forms), otherwise a genuine
    /// proportionality can be missed. A zero `self` is proportional to any
    /// nonzero reference with factor 0; a zero reference has no
    /// well-defined factor.
    pub fn proportionality(&self, reference: &Expr) -> Option<(Q, ScalMono)> {
        let Some(r0) = reference.terms.first() else { return None };
        if self.is_zero() {
            return Some((Q::zero(), ScalMono::one()));
        }
        for m in &self.terms {
            if m.facs != r0.facs {
                continue;
            }
            let k = m.coef / r0.coef;
            let s = m.scal.mul(&r0.scal.pow(super::num::qei(-1)));
            if self.sub(&reference.scale(k).scale_scal(&s)).canon().is_zero() {
                return Some((k, s));
            }
        }
        None
    }

    /// Converts the exactly-two free occurrences of `label` in every
    /// monomial into a dummy pair. The two occurrences must have opposite
    /// variance. This is the contraction primitive behind all series
    /// composition.
    pub fn bond_label(&self, label: &str) -> Expr {
        let id = super::index::intern_label(label);
        let terms = self
            .terms
            .iter()
            .map(|m| {
                let mut m2 = m.clone();
                let b = m2.max_bond_id().map(|x| x + 1).unwrap_or(0);
                let mut hits = 0u32;
                let mut ups = [false; 2];
                for f in &mut m2.facs {
                    for i in f.indices_mut() {
                        if i.name == IName::Free(id) {
                            assert!(hits < 2, "label `{label}` occurs more than twice");
                            ups[hits as usize] = i.up;
                            i.name = IName::Bond(b);
                            hits += 1;
                        }
                    }
                }
                assert_eq!(hits, 2, "label `{label}` must occur exactly twice per monomial");
                assert_ne!(ups[0], ups[1], "label `{label}` must pair upper with lower");
                m2
            })
            .collect();
        Expr { terms }
    }

    /// Bonds one occurrence of `la` against one occurrence of `lb` in every
    /// monomial. Both labels must occur exactly once and with opposite
    /// variance.
    pub fn bond_label_pair(&self, la: &str, lb: &str) -> Expr {
        let ida = super::index::intern_label(la);
        let idb = super::index::intern_label(lb);
        let terms = self
            .terms
            .iter()
            .map(|m| {
                let mut m2 = m.clone();
                let b = m2.max_bond_id().map(|x| x + 1).unwrap_or(0);
                let mut seen = [0u32; 2];
                let mut ups = [false; 2];
                for f in &mut m2.facs {
                    for i in f.indices_mut() {
                        let which = if i.name == IName::Free(ida) {
                            0
                        } else if i.name == IName::Free(idb) {
                            1
                        } else {
                            continue;
                        };
                        seen[which] += 1;
                        ups[which] = i.up;
                        i.name = IName::Bond(b);
                    }
                }
                assert_eq!(seen, [1, 1], "labels `{la}`/`{lb}` must each occur once");
                assert_ne!(ups[0], ups[1], "labels `{la}`/`{lb}` must pair upper with lower");
                m2
            })
            .collect();
        Expr { terms }
    }

    /// Product followed by contraction over the given labels.
    pub fn join(&self, other: &Expr, labels: &[&str]) -> Expr {
        let mut e = self.mul(other);
        for l in labels {
            e = e.bond_label(l);
        }
        e
    }

    /// Number of perturbation-field factors (h, dA, phi; the field strength
    /// counts as one vector field).
    pub fn field_count(m: &Mono) -> u32 {
        m.facs
            .iter()
            .filter(|f| matches!(f.head, Head::H | Head::DA | Head::Phi | Head::FdA))
            .count() as u32
    }

    /// Drops monomials with more than `max` field factors.
    pub fn truncate_fields(&self, max: u32) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .filter(|m| Expr::field_count(m) <= max)
                .cloned()
                .collect(),
        }
    }

    /// Canonical normal form; see the `canon` module.
    pub fn canonical(self) -> Result<Expr, super::ExprError> {
        super::canon::canon_expr(self)
    }

    /// Canonical form, panicking on malformed input. Internal pipelines
    /// construct well-formed expressions by design.
    pub fn canon(self) -> Expr {
        self.canonical().expect("internally constructed expression must canonicalize")
    }
}
