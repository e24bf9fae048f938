//! Model configuration: the six coupling series plus sector flags.
//!
//! The text format is flat key-value, one assignment per line, `#` comments.
//! Coupling coefficients are named by their standard effective-field-theory
//! slots (`G3.c31 = -c3`); each slot implies the scale block that makes the
//! parent Lagrangian dimension four, so values are dimensionless except for
//! the constant quartic slot `G4.c40`, which carries its own scale.

use num_traits::Zero;

use crate::expr::{q, CoefVar, Fam, Q, ScalMono, Sym};

use super::series::{scal_of, CouplingSeries, CouplingTerm};
use super::ModelError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelConfig {
    pub g2: CouplingSeries,
    pub g3: CouplingSeries,
    pub g4: CouplingSeries,
    pub g5: CouplingSeries,
    pub small_g5: CouplingSeries,
    pub g6: CouplingSeries,
    pub include_l5: bool,
    pub include_l6: bool,
    pub include_y_sector: bool,
}

fn sc(fam: Fam, n: u8, var: CoefVar) -> Sym {
    Sym::SeriesCoef { fam, n, var }
}

impl ModelConfig {
    pub fn empty() -> ModelConfig {
        ModelConfig {
            g2: CouplingSeries::zero(Fam::G2),
            g3: CouplingSeries::zero(Fam::G3),
            g4: CouplingSeries::zero(Fam::G4),
            g5: CouplingSeries::zero(Fam::G5),
            small_g5: CouplingSeries::zero(Fam::SmallG5),
            g6: CouplingSeries::zero(Fam::G6),
            include_l5: false,
            include_l6: false,
            include_y_sector: false,
        }
    }

    /// Massive vector minimally coupled to gravity: kinetic term plus mass,
    /// one cubic self-coupling, constant quartic coupling.
    pub fn minimal() -> ModelConfig {
        let mut cfg = ModelConfig::empty();
        cfg.g2.terms = vec![
            CouplingTerm::new(0, 0, 1, q(1, 1), ScalMono::one()),
            CouplingTerm::new(1, 0, 0, q(-1, 1), scal_of(&[(Sym::M, 2)])),
        ];
        cfg.g3.terms =
            vec![CouplingTerm::new(1, 0, 0, q(-1, 1), scal_of(&[(Sym::C3, 1), (Sym::M, 2), (Sym::Lam2, -2)]))];
        cfg.g4.terms = vec![CouplingTerm::new(0, 0, 0, q(1, 2), scal_of(&[(Sym::Mpl, 2)]))];
        cfg
    }

    /// Free photon: kinetic scalar only, no gravity sector.
    pub fn maxwell() -> ModelConfig {
        let mut cfg = ModelConfig::empty();
        cfg.g2.terms = vec![CouplingTerm::new(0, 0, 1, q(1, 1), ScalMono::one())];
        cfg
    }

    /// Vector-Galileon effective theory: the kinetic core dressed by
    /// dimensionless blocks, a cubic tower, and a quartic tower on top of
    /// the constant quartic coupling, everything stored through quartic
    /// field order.
    pub fn vector_galileon() -> ModelConfig {
        let m2 = |e: i32| scal_of(&[(Sym::M, 2 * e)]);
        let mut cfg = ModelConfig::empty();
        let c = |n, var| sc(Fam::G2, n, var);
        cfg.g2.terms = vec![
            CouplingTerm::new(0, 0, 1, q(1, 1), ScalMono::one()),
            CouplingTerm::new(1, 0, 0, q(-1, 1), m2(1)),
            // (F - m^2 X) dressed once by m^2 X / Lam2^4
            CouplingTerm::new(1, 0, 1, q(1, 1), scal_of(&[(c(2, CoefVar::X), 1), (Sym::M, 2), (Sym::Lam2, -4)])),
            CouplingTerm::new(2, 0, 0, q(-1, 1), scal_of(&[(c(2, CoefVar::X), 1), (Sym::M, 4), (Sym::Lam2, -4)])),
            // (F - m^2 X) dressed once by F / Lam2^4
            CouplingTerm::new(0, 0, 2, q(1, 1), scal_of(&[(c(2, CoefVar::F), 1), (Sym::Lam2, -4)])),
            CouplingTerm::new(1, 0, 1, q(-1, 1), scal_of(&[(c(2, CoefVar::F), 1), (Sym::M, 2), (Sym::Lam2, -4)])),
        ];
        cfg.g2.trunc = 4;
        cfg.g3.terms = vec![
            CouplingTerm::new(1, 0, 0, q(1, 1), scal_of(&[(sc(Fam::G3, 1, CoefVar::Plain), 1), (Sym::M, 2), (Sym::Lam2, -2)])),
            CouplingTerm::new(2, 0, 0, q(1, 1), scal_of(&[(sc(Fam::G3, 2, CoefVar::Plain), 1), (Sym::M, 4), (Sym::Lam2, -6)])),
        ];
        cfg.g3.trunc = 4;
        cfg.g4.terms = vec![
            CouplingTerm::new(0, 0, 0, q(1, 2), scal_of(&[(Sym::Mpl, 2)])),
            CouplingTerm::new(2, 0, 0, q(1, 1), scal_of(&[(sc(Fam::G4, 2, CoefVar::Plain), 1), (Sym::M, 2), (Sym::Lam2, -4)])),
            CouplingTerm::new(3, 0, 0, q(1, 1), scal_of(&[(sc(Fam::G4, 3, CoefVar::Plain), 1), (Sym::M, 4), (Sym::Lam2, -8)])),
        ];
        cfg.g4.trunc = 6;
        cfg
    }

    pub fn series(&self, fam: Fam) -> &CouplingSeries {
        match fam {
            Fam::G2 => &self.g2,
            Fam::G3 => &self.g3,
            Fam::G4 => &self.g4,
            Fam::G5 => &self.g5,
            Fam::SmallG5 => &self.small_g5,
            Fam::G6 => &self.g6,
        }
    }

    fn series_mut(&mut self, fam: Fam) -> &mut CouplingSeries {
        match fam {
            Fam::G2 => &mut self.g2,
            Fam::G3 => &mut self.g3,
            Fam::G4 => &mut self.g4,
            Fam::G5 => &mut self.g5,
            Fam::SmallG5 => &mut self.small_g5,
            Fam::G6 => &mut self.g6,
        }
    }

    /// Per-series checks plus flag consistency: a sector whose flag is off
    /// must carry no stored terms.
    pub fn validate(&self) -> Result<(), ModelError> {
        for fam in Fam::ALL {
            self.series(fam).validate()?;
        }
        if !self.include_l5 && !(self.g5.is_zero() && self.small_g5.is_zero()) {
            return Err(ModelError::SectorFlagConflict("include_L5".into()));
        }
        if !self.include_l6 && !self.g6.is_zero() {
            return Err(ModelError::SectorFlagConflict("include_L6".into()));
        }
        if !self.include_y_sector && self.g2.terms.iter().any(|t| t.ey > 0 && !t.coef.is_zero()) {
            return Err(ModelError::SectorFlagConflict("include_Y_sector".into()));
        }
        Ok(())
    }

    /// Parses the flat key-value format. An optional `preset = <name>` line
    /// seeds the configuration; coefficient slots add terms on top of it,
    /// and when the same slot is assigned twice the later line wins.
    pub fn parse(text: &str) -> Result<ModelConfig, ModelError> {
        let mut cfg = ModelConfig::empty();
        let mut slots: Vec<(Fam, (u8, CoefVar), CouplingTerm)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or_else(|| cerr(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "preset" => {
                    cfg = match value {
                        "minimal" => ModelConfig::minimal(),
                        "maxwell" => ModelConfig::maxwell(),
                        "vector_galileon" => ModelConfig::vector_galileon(),
                        _ => return Err(cerr(line, format!("unknown preset `{value}`"))),
                    };
                }
                "include_L5" => cfg.include_l5 = parse_bool(value, line)?,
                "include_L6" => cfg.include_l6 = parse_bool(value, line)?,
                "include_Y_sector" => cfg.include_y_sector = parse_bool(value, line)?,
                _ => {
                    let (fam, slot) = parse_slot_key(key, line)?;
                    let (coef, mut scal) = parse_value(value, line)?;
                    let term = slot_term(fam, slot, coef, &mut scal, line)?;
                    slots.retain(|(f, s, _)| (*f, *s) != (fam, slot));
                    slots.push((fam, slot, term));
                }
            }
        }
        for (fam, _, term) in slots {
            if !term.coef.is_zero() {
                cfg.series_mut(fam).terms.push(term);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn cerr(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Config { line, msg: msg.into() }
}

fn parse_bool(v: &str, line: usize) -> Result<bool, ModelError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(cerr(line, format!("expected true or false, got `{v}`"))),
    }
}

/// Key forms: `G2.c2<n><X|Y|F>`, `G3.c3<n>`, `G4.c4<n>`, `G5.c5<n>`,
/// `g5.cg5<n>`, `G6.c6<n>`.
fn parse_slot_key(key: &str, line: usize) -> Result<(Fam, (u8, CoefVar)), ModelError> {
    let (fam_s, coef_s) = key
        .split_once('.')
        .ok_or_else(|| cerr(line, format!("unknown key `{key}`")))?;
    let fam = match fam_s {
        "G2" => Fam::G2,
        "G3" => Fam::G3,
        "G4" => Fam::G4,
        "G5" => Fam::G5,
        "g5" => Fam::SmallG5,
        "G6" => Fam::G6,
        _ => return Err(cerr(line, format!("unknown coupling `{fam_s}`"))),
    };
    let Some(Sym::SeriesCoef { fam: f2, n, var }) = Sym::parse(coef_s) else {
        return Err(cerr(line, format!("`{coef_s}` is not a series-coefficient name")));
    };
    if f2 != fam {
        return Err(cerr(line, format!("coefficient `{coef_s}` does not belong to `{fam_s}`")));
    }
    if var != CoefVar::Plain && fam != Fam::G2 {
        return Err(cerr(line, format!("only the kinetic family takes `{coef_s}`-style slots")));
    }
    Ok((fam, (n, var)))
}

/// Value grammar: `[-]<rational>` or `[-][<rational>*]<symbol tokens>`,
/// tokens in the scalar-monomial syntax (`mpl^2`, `c3`).
fn parse_value(v: &str, line: usize) -> Result<(Q, ScalMono), ModelError> {
    let (neg, rest) = match v.strip_prefix('-') {
        Some(r) => (true, r.trim()),
        None => (false, v),
    };
    let mut coef = q(1, 1);
    let mut scal = ScalMono::one();
    for (i, piece) in rest.split('*').map(str::trim).enumerate() {
        if piece.is_empty() {
            return Err(cerr(line, "empty factor in value"));
        }
        if piece.chars().next().unwrap().is_ascii_digit() {
            let (n, d) = match piece.split_once('/') {
                Some((n, d)) => (n, d),
                None => (piece, "1"),
            };
            let (n, d): (i128, i128) = match (n.parse(), d.parse()) {
                (Ok(n), Ok(d)) if d != 0 => (n, d),
                _ => return Err(cerr(line, format!("bad rational `{piece}`"))),
            };
            if i != 0 {
                return Err(cerr(line, "rational factor must come first"));
            }
            coef = q(n, d);
        } else {
            let (s, e) = ScalMono::parse_token(piece)
                .ok_or_else(|| cerr(line, format!("unknown symbol `{piece}`")))?;
            scal.mul_sym(s, e);
        }
    }
    if neg {
        coef = -coef;
    }
    Ok((coef, scal))
}

/// Maps a coefficient slot to its term: the implied scale block makes the
/// term's Lagrangian dimension four, the slot symbol is kept when the value
/// supplies no symbol of its own.
fn slot_term(
    fam: Fam,
    (n, var): (u8, CoefVar),
    coef: Q,
    scal: &mut ScalMono,
    line: usize,
) -> Result<CouplingTerm, ModelError> {
    let ni = n as i32;
    let (ex, ey, ef, block) = match (fam, var) {
        (Fam::G2, CoefVar::X) if n >= 1 => (n, 0, 0, scal_of(&[(Sym::M, 2 * ni), (Sym::Lam2, -4 * (ni - 1))])),
        (Fam::G2, CoefVar::F) if n >= 1 => (0, 0, n, scal_of(&[(Sym::Lam2, -4 * (ni - 1))])),
        (Fam::G2, CoefVar::Y) if n >= 1 => {
            (n - 1, 1, 0, scal_of(&[(Sym::M, 2 * (ni - 1)), (Sym::Lam2, -4 * ni + 2)]))
        }
        (Fam::G3, CoefVar::Plain) if n >= 1 => {
            (n, 0, 0, scal_of(&[(Sym::M, 2 * ni), (Sym::Lam2, -4 * ni + 2)]))
        }
        (Fam::G4, CoefVar::Plain) if n == 0 => (0, 0, 0, ScalMono::one()),
        (Fam::G4, CoefVar::Plain) => {
            (n, 0, 0, scal_of(&[(Sym::M, 2 * (ni - 1)), (Sym::Lam2, -4 * (ni - 1))]))
        }
        (Fam::G5, CoefVar::Plain) if n == 0 => (0, 0, 0, ScalMono::one()),
        (Fam::G5, CoefVar::Plain) => {
            (n, 0, 0, scal_of(&[(Sym::M, 2 * (ni - 1)), (Sym::Lam2, -4 * ni + 2)]))
        }
        (Fam::SmallG5, CoefVar::Plain) => {
            (n, 0, 0, scal_of(&[(Sym::M, 2 * ni), (Sym::Lam2, -4 * ni - 2)]))
        }
        (Fam::G6, CoefVar::Plain) if n == 0 => (0, 0, 0, scal_of(&[(Sym::Lam2, -2)])),
        (Fam::G6, CoefVar::Plain) => {
            (n, 0, 0, scal_of(&[(Sym::M, 2 * (ni - 1)), (Sym::Lam2, -4 * ni)]))
        }
        _ => return Err(cerr(line, "coefficient slot outside the standard form")),
    };
    Ok(CouplingTerm::new(ex, ey, ef, coef, scal.mul(&block)))
}
