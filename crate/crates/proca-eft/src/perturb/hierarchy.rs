//! Numeric check of the scale ordering that makes the EFT window exist.

use super::PerturbError;

#[derive(Clone, PartialEq, Debug)]
pub enum HierarchyVerdict {
    Holds,
    Broken(String),
}

impl std::fmt::Display for HierarchyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HierarchyVerdict::Holds => write!(f, "hierarchy holds"),
            HierarchyVerdict::Broken(why) => write!(f, "EFT hierarchy broken: {why}"),
        }
    }
}

/// One adjacent link of the scale chain.
#[derive(Clone, PartialEq, Debug)]
pub struct Margin {
    pub lower_name: &'static str,
    pub upper_name: &'static str,
    pub lower: f64,
    pub upper: f64,
    /// upper / lower; the link holds strictly when this exceeds 1.
    pub ratio: f64,
}

/// Derived scales and the ordering verdict for `m < lam3 < lam4 < lam2 <
/// mpl`.
#[derive(Clone, PartialEq, Debug)]
pub struct HierarchyReport {
    pub m: f64,
    pub lam2: f64,
    pub mpl: f64,
    pub lam3: f64,
    pub lam4: f64,
    pub margins: Vec<Margin>,
    pub verdict: HierarchyVerdict,
}

/// Evaluates `lam3 = (lam2^2 m)^(1/3)` and `lam4 = (mpl m)^(1/2)` and
/// checks the strict ordering of the five scales, reporting the margin of
/// every adjacent link.
pub fn scale_hierarchy(m: f64, lam2: f64, mpl: f64) -> Result<HierarchyReport, PerturbError> {
    for (v, name) in [(m, "m"), (lam2, "lam2"), (mpl, "mpl")] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(PerturbError::NonPositiveScale(name));
        }
    }
    let lam3 = (lam2 * lam2 * m).cbrt();
    let lam4 = (mpl * m).sqrt();
    let chain = [("m", m), ("lam3", lam3), ("lam4", lam4), ("lam2", lam2), ("mpl", mpl)];
    let mut margins = Vec::new();
    let mut failures = Vec::new();
    for w in chain.windows(2) {
        let (ln, lv) = w[0];
        let (un, uv) = w[1];
        margins.push(Margin {
            lower_name: ln,
            upper_name: un,
            lower: lv,
            upper: uv,
            ratio: uv / lv,
        });
        if !(lv < uv) {
            failures.push(format!("{ln} < {un} fails ({lv:.6e} >= {uv:.6e})"));
        }
    }
    let verdict = if failures.is_empty() {
        HierarchyVerdict::Holds
    } else {
        HierarchyVerdict::Broken(failures.join("; "))
    };
    Ok(HierarchyReport { m, lam2, mpl, lam3, lam4, margins, verdict })
}
