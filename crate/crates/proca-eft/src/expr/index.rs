//! Lorentz indices.
//!
//! An index is either free (named) or one end of a bond. A bond is a dummy
//! pair: its id occurs exactly twice in a monomial, once upper and once
//! lower after canonicalization. Free labels are interned in a global pool
//! that is pre-seeded in a fixed order so that canonical forms and printed
//! files are reproducible.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Index name: interned free label or bond id local to one monomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum IName {
    Free(u32),
    Bond(u32),
}

/// One index slot. Ordering is (name, variance) with lower < upper.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Idx {
    pub name: IName,
    pub up: bool,
}

impl Idx {
    pub fn free(id: u32, up: bool) -> Idx {
        Idx { name: IName::Free(id), up }
    }

    pub fn bond(id: u32, up: bool) -> Idx {
        Idx { name: IName::Bond(id), up }
    }

    pub fn is_bond(&self) -> bool {
        matches!(self.name, IName::Bond(_))
    }

    pub fn flipped(self) -> Idx {
        Idx { name: self.name, up: !self.up }
    }
}

const SEED_LABELS: &[&str] = &[
    "mu", "nu", "al", "be", "ga", "de", "rho", "sig", "ka", "la", "ta", "om", "ph", "ch", "ps",
    "et", "th", "io", "ze", "xi", "a", "b", "c", "e", "f", "g", "j", "n", "o", "q", "r", "s", "t",
    "u", "v", "w", "x", "y", "z",
];

struct LabelPool {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

static POOL: Lazy<Mutex<LabelPool>> = Lazy::new(|| {
    let mut pool = LabelPool { names: Vec::new(), ids: HashMap::new() };
    for l in SEED_LABELS {
        let id = pool.names.len() as u32;
        pool.names.push((*l).to_string());
        pool.ids.insert((*l).to_string(), id);
    }
    Mutex::new(pool)
});

/// Interns a free-index label and returns its id.
pub fn intern_label(name: &str) -> u32 {
    let mut pool = POOL.lock().unwrap();
    if let Some(&id) = pool.ids.get(name) {
        return id;
    }
    let id = pool.names.len() as u32;
    pool.names.push(name.to_string());
    pool.ids.insert(name.to_string(), id);
    id
}

pub fn label_name(id: u32) -> String {
    POOL.lock().unwrap().names[id as usize].clone()
}

/// Upper free index by label.
pub fn up(name: &str) -> Idx {
    Idx::free(intern_label(name), true)
}

/// Lower free index by label.
pub fn dn(name: &str) -> Idx {
    Idx::free(intern_label(name), false)
}

/// Upper bond end.
pub fn bup(id: u32) -> Idx {
    Idx::bond(id, true)
}

/// Lower bond end.
pub fn bdn(id: u32) -> Idx {
    Idx::bond(id, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        assert_eq!(intern_label("mu"), 0);
        assert_eq!(intern_label("nu"), 1);
        let fresh = intern_label("custom_label_xyz");
        assert_eq!(label_name(fresh), "custom_label_xyz");
        assert_eq!(intern_label("custom_label_xyz"), fresh);
        assert!(dn("mu") < up("mu"));
        assert!(up("mu") < up("nu"));
    }
}
