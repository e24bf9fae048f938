//! Tensor factors: a head symbol, its index slots, and a derivative chain.

use super::index::Idx;
use smallvec::SmallVec;

/// Head symbol of a tensor factor.
///
/// Variant order fixes the factor sort order inside canonical monomials.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Head {
    /// Flat metric; mixed variance doubles as the Kronecker delta.
    Eta,
    /// Levi-Civita symbol, 4 slots, totally antisymmetric.
    Lc,
    /// Graviton perturbation, symmetric, lower indices fundamental.
    H,
    /// Vector perturbation, one slot.
    DA,
    /// Stueckelberg scalar.
    Phi,
    /// Field strength of the vector perturbation, antisymmetric; expanded
    /// into derivative-of-DA form during canonicalization.
    FdA,
    /// Constant vector background value.
    ABar,
    /// External momentum p_n (momentum space, no derivative chain).
    Mom(u8),
    /// Loop momentum k.
    LoopK,
    /// Vector-leg polarization for amplitude reports.
    Pol(u8),
    /// Graviton-leg polarization, symmetric.
    PolH(u8),
    /// Internal contraction marker used during diagram assembly; never
    /// serialized and never evaluated.
    Mark(u16),
}

/// Slot symmetry class of a head.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sym2 {
    None,
    Symmetric,
    Anti,
}

impl Head {
    pub fn arity(self) -> usize {
        match self {
            Head::Eta | Head::H | Head::FdA | Head::PolH(_) => 2,
            Head::Lc => 4,
            Head::DA | Head::ABar | Head::Mom(_) | Head::LoopK | Head::Pol(_) => 1,
            Head::Phi => 0,
            Head::Mark(_) => usize::MAX, // variable, checked at build sites
        }
    }

    pub fn sym2(self) -> Sym2 {
        match self {
            Head::Eta | Head::H | Head::PolH(_) => Sym2::Symmetric,
            Head::Lc | Head::FdA => Sym2::Anti,
            _ => Sym2::None,
        }
    }

    /// Heads a position-space partial derivative can act on.
    pub fn differentiable(self) -> bool {
        matches!(self, Head::H | Head::DA | Head::Phi | Head::FdA)
    }

    /// Quantum fields for functional derivatives and Wick pairing.
    pub fn is_field(self) -> bool {
        matches!(self, Head::H | Head::DA | Head::Phi | Head::FdA)
    }

    pub fn name(self) -> String {
        match self {
            Head::Eta => "eta".into(),
            Head::Lc => "lc".into(),
            Head::H => "h".into(),
            Head::DA => "dA".into(),
            Head::Phi => "phi".into(),
            Head::FdA => "F".into(),
            Head::ABar => "Abar".into(),
            Head::Mom(n) => format!("p{n}"),
            Head::LoopK => "k".into(),
            Head::Pol(n) => format!("pol{n}"),
            Head::PolH(n) => format!("E{n}"),
            Head::Mark(n) => format!("MARK{n}"),
        }
    }

    pub fn parse(s: &str) -> Option<Head> {
        match s {
            "eta" | "delta" => return Some(Head::Eta),
            "lc" => return Some(Head::Lc),
            "h" => return Some(Head::H),
            "dA" => return Some(Head::DA),
            "phi" => return Some(Head::Phi),
            "F" => return Some(Head::FdA),
            "Abar" => return Some(Head::ABar),
            "k" => return Some(Head::LoopK),
            _ => {}
        }
        if let Some(r) = s.strip_prefix("pol") {
            return r.parse().ok().map(Head::Pol);
        }
        if let Some(r) = s.strip_prefix('p') {
            return r.parse().ok().map(Head::Mom);
        }
        if let Some(r) = s.strip_prefix('E') {
            return r.parse().ok().map(Head::PolH);
        }
        None
    }
}

/// A single tensor factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Factor {
    pub head: Head,
    pub slots: SmallVec<[Idx; 4]>,
    /// Position-space derivative chain; partials commute, so the chain is
    /// kept sorted by canonicalization.
    pub ders: SmallVec<[Idx; 2]>,
}

impl Factor {
    pub fn new(head: Head, slots: &[Idx]) -> Factor {
        Factor { head, slots: SmallVec::from_slice(slots), ders: SmallVec::new() }
    }

    pub fn with_ders(head: Head, slots: &[Idx], ders: &[Idx]) -> Factor {
        Factor { head, slots: SmallVec::from_slice(slots), ders: SmallVec::from_slice(ders) }
    }

    /// All index positions: slots then derivatives.
    pub fn indices(&self) -> impl Iterator<Item = &Idx> {
        self.slots.iter().chain(self.ders.iter())
    }

    pub fn indices_mut(&mut self) -> impl Iterator<Item = &mut Idx> {
        self.slots.iter_mut().chain(self.ders.iter_mut())
    }

    /// Arity and derivative-placement checks; canonicalization rejects
    /// factors violating these.
    pub fn well_formed(&self) -> bool {
        let ar = self.head.arity();
        if ar != usize::MAX && self.slots.len() != ar {
            return false;
        }
        if !self.ders.is_empty() && !self.head.differentiable() {
            return false;
        }
        true
    }
}

pub fn fac(head: Head, slots: &[Idx]) -> Factor {
    Factor::new(head, slots)
}

pub fn fac_d(head: Head, slots: &[Idx], ders: &[Idx]) -> Factor {
    Factor::with_ders(head, slots, ders)
}
