//! Symbolic scalars and scalar monomials.
//!
//! A scalar monomial is a product of named symbols raised to exact rational
//! powers. It commutes with everything, so expressions factor as
//! `rational * scalar monomial * tensor factors`.

use super::num::{fmt_qe, parse_qe, Qe};
use num_traits::Zero;
use smallvec::SmallVec;

/// Coupling-function families of the generalized vector action.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Fam {
    G2,
    G3,
    G4,
    G5,
    SmallG5,
    G6,
}

impl Fam {
    pub const ALL: [Fam; 6] = [Fam::G2, Fam::G3, Fam::G4, Fam::G5, Fam::SmallG5, Fam::G6];

    pub fn base_name(self) -> &'static str {
        match self {
            Fam::G2 => "G2",
            Fam::G3 => "G3",
            Fam::G4 => "G4",
            Fam::G5 => "G5",
            Fam::SmallG5 => "g5",
            Fam::G6 => "G6",
        }
    }

    pub fn coef_tag(self) -> &'static str {
        match self {
            Fam::G2 => "2",
            Fam::G3 => "3",
            Fam::G4 => "4",
            Fam::G5 => "5",
            Fam::SmallG5 => "g5",
            Fam::G6 => "6",
        }
    }

    /// Mass dimension of the coupling function itself.
    pub fn base_dim(self) -> i32 {
        match self {
            Fam::G2 => 4,
            Fam::G3 => 2,
            Fam::G4 => 2,
            Fam::G5 => 0,
            Fam::SmallG5 => -2,
            Fam::G6 => -2,
        }
    }
}

/// Expansion variable tag for series coefficients.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CoefVar {
    Plain,
    X,
    Y,
    F,
}

impl CoefVar {
    pub fn tag(self) -> &'static str {
        match self {
            CoefVar::Plain => "",
            CoefVar::X => "X",
            CoefVar::Y => "Y",
            CoefVar::F => "F",
        }
    }
}

/// Symbolic scalar. The set is closed: every scalar the pipeline can produce
/// is listed here, which keeps ordering and serialization total.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    /// Imaginary unit; exponent normalized into {0, 1} with a sign flip.
    ImagI,
    /// Vector mass m.
    M,
    /// Strong-coupling scale of the self-interactions.
    Lam2,
    /// Cubic decoupling-limit scale, (Lam2^2 m)^(1/3).
    Lam3,
    /// Mixed decoupling-limit scale, (m Mpl)^(1/2).
    Lam4,
    /// Reduced Planck mass.
    Mpl,
    /// Dimensionless cubic coupling of the minimal model.
    C3,
    Pi,
    /// Dimensional-regularization expansion parameter; poles carry eps^-1.
    Eps,
    /// Auxiliary mass used internally when expanding vacuum integrals; it
    /// must cancel from every ultraviolet pole.
    MuAux,
    /// Spacetime-dimension combination d + 2k, kept symbolic until the
    /// dimreg substitution d -> 4 - 2 eps is requested.
    Dp(i8),
    /// Background value of a coupling function or its derivative, e.g.
    /// `Gbar { fam: G2, dx: 1, dy: 0, df: 0 }` for dG2/dX at the background.
    Gbar { fam: Fam, dx: u8, dy: u8, df: u8 },
    /// Dimensionless Taylor coefficient of a coupling function.
    SeriesCoef { fam: Fam, n: u8, var: CoefVar },
}

impl Sym {
    pub fn name(self) -> String {
        match self {
            Sym::ImagI => "i".into(),
            Sym::M => "m".into(),
            Sym::Lam2 => "lam2".into(),
            Sym::Lam3 => "lam3".into(),
            Sym::Lam4 => "lam4".into(),
            Sym::Mpl => "mpl".into(),
            Sym::C3 => "c3".into(),
            Sym::Pi => "pi".into(),
            Sym::Eps => "eps".into(),
            Sym::MuAux => "mux".into(),
            Sym::Dp(0) => "d".into(),
            Sym::Dp(k) if k < 0 => format!("dm{}", -2 * (k as i32)),
            Sym::Dp(k) => format!("dp{}", 2 * (k as i32)),
            Sym::Gbar { fam, dx, dy, df } => {
                let mut s = fam.base_name().to_string();
                for _ in 0..dx {
                    s.push('X');
                }
                for _ in 0..dy {
                    s.push('Y');
                }
                for _ in 0..df {
                    s.push('F');
                }
                s
            }
            Sym::SeriesCoef { fam, n, var } => {
                format!("c{}{}{}", fam.coef_tag(), n, var.tag())
            }
        }
    }

    pub fn parse(s: &str) -> Option<Sym> {
        match s {
            "i" => return Some(Sym::ImagI),
            "m" => return Some(Sym::M),
            "lam2" => return Some(Sym::Lam2),
            "lam3" => return Some(Sym::Lam3),
            "lam4" => return Some(Sym::Lam4),
            "mpl" => return Some(Sym::Mpl),
            "c3" => return Some(Sym::C3),
            "pi" => return Some(Sym::Pi),
            "eps" => return Some(Sym::Eps),
            "mux" => return Some(Sym::MuAux),
            "d" => return Some(Sym::Dp(0)),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("dm") {
            let n: i32 = rest.parse().ok()?;
            if n > 0 && n % 2 == 0 {
                return Some(Sym::Dp((-n / 2) as i8));
            }
            return None;
        }
        if let Some(rest) = s.strip_prefix("dp") {
            let n: i32 = rest.parse().ok()?;
            if n > 0 && n % 2 == 0 {
                return Some(Sym::Dp((n / 2) as i8));
            }
            return None;
        }
        // Background coupling values: family base name plus X/Y/F suffixes.
        for fam in Fam::ALL {
            if let Some(rest) = s.strip_prefix(fam.base_name()) {
                let (mut dx, mut dy, mut df) = (0u8, 0u8, 0u8);
                let mut ok = true;
                for ch in rest.chars() {
                    match ch {
                        'X' => dx += 1,
                        'Y' => dy += 1,
                        'F' => df += 1,
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return Some(Sym::Gbar { fam, dx, dy, df });
                }
            }
        }
        // Series coefficients: c<famtag><digit>[X|Y|F].
        if let Some(rest) = s.strip_prefix('c') {
            for fam in Fam::ALL {
                if let Some(r2) = rest.strip_prefix(fam.coef_tag()) {
                    let mut chars = r2.chars();
                    let dig = chars.next()?;
                    if !dig.is_ascii_digit() {
                        continue;
                    }
                    let n = dig.to_digit(10)? as u8;
                    let var = match chars.as_str() {
                        "" => CoefVar::Plain,
                        "X" => CoefVar::X,
                        "Y" => CoefVar::Y,
                        "F" => CoefVar::F,
                        _ => continue,
                    };
                    return Some(Sym::SeriesCoef { fam, n, var });
                }
            }
        }
        None
    }

    /// Mass dimension, used by the Lagrangian dimension audit.
    pub fn mass_dim(self) -> i32 {
        match self {
            Sym::M | Sym::Lam2 | Sym::Lam3 | Sym::Lam4 | Sym::Mpl | Sym::MuAux => 1,
            Sym::Gbar { fam, dx, dy, df } => {
                fam.base_dim() - 2 * dx as i32 - 6 * dy as i32 - 4 * df as i32
            }
            _ => 0,
        }
    }
}

/// Product of symbols with exact rational exponents; kept sorted with no
/// zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ScalMono {
    entries: SmallVec<[(Sym, Qe); 4]>,
}

impl ScalMono {
    pub fn one() -> Self {
        ScalMono::default()
    }

    pub fn from_entries(mut entries: Vec<(Sym, Qe)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out = ScalMono::one();
        for (s, e) in entries {
            out.mul_sym(s, e);
        }
        out
    }

    pub fn sym(s: Sym) -> Self {
        let mut m = ScalMono::one();
        m.mul_sym(s, Qe::from_integer(1));
        m
    }

    pub fn sym_pow(s: Sym, e: Qe) -> Self {
        let mut m = ScalMono::one();
        m.mul_sym(s, e);
        m
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Sym, Qe)> {
        self.entries.iter()
    }

    pub fn exp_of(&self, s: Sym) -> Qe {
        self.entries
            .iter()
            .find(|(t, _)| *t == s)
            .map(|(_, e)| *e)
            .unwrap_or_else(Qe::zero)
    }

    pub fn mul_sym(&mut self, s: Sym, e: Qe) {
        if e.is_zero() {
            return;
        }
        match self.entries.binary_search_by_key(&s, |x| x.0) {
            Ok(i) => {
                self.entries[i].1 += e;
                if self.entries[i].1.is_zero() {
                    self.entries.remove(i);
                }
            }
            Err(i) => self.entries.insert(i, (s, e)),
        }
    }

    pub fn mul(&self, o: &ScalMono) -> ScalMono {
        let mut out = self.clone();
        for (s, e) in o.entries.iter() {
            out.mul_sym(*s, *e);
        }
        out
    }

    /// Raises the whole monomial to a rational power.
    pub fn pow(&self, e: Qe) -> ScalMono {
        if e.is_zero() {
            return ScalMono::one();
        }
        let mut out = ScalMono::one();
        for (s, x) in self.entries.iter() {
            out.mul_sym(*s, *x * e);
        }
        out
    }

    /// Removes a symbol entirely, returning its former exponent.
    pub fn take_sym(&mut self, s: Sym) -> Qe {
        match self.entries.binary_search_by_key(&s, |x| x.0) {
            Ok(i) => self.entries.remove(i).1,
            Err(_) => Qe::zero(),
        }
    }

    pub fn mass_dim(&self) -> Qe {
        let mut d = Qe::zero();
        for (s, e) in self.entries.iter() {
            d += *e * Qe::from_integer(s.mass_dim());
        }
        d
    }

    /// Textual form of the entries, e.g. `m^2 eps^-1`.
    pub fn to_tokens(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(s, e)| format!("{}^{}", s.name(), fmt_qe(*e)))
            .collect()
    }

    pub fn parse_token(tok: &str) -> Option<(Sym, Qe)> {
        // bare name means first power
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, parse_qe(e)?),
            None => (tok, Qe::from_integer(1)),
        };
        let s = Sym::parse(name)?;
        Some((s, exp))
    }
}
