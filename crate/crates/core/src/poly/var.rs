//! The global variable universe.
//!
//! Every polynomial in the crate lives over the same ordered symbol list:
//! the ten base symbols below, followed by an unbounded tail of auxiliary
//! variables `t1, t2, ...` used for saturation and definitional extensions.
//! Lower index means larger in lexicographic orders.

use std::fmt;

/// Names of the base symbols, in canonical order.
pub const BASE_SYMBOLS: [&str; 10] = [
    "alpha", "beta", "gamma", "delta", "eta", "lam", "l1", "l2", "l3", "lbar",
];

/// Number of base symbols; auxiliary variables start at this index.
pub const BASE_COUNT: u16 = BASE_SYMBOLS.len() as u16;

/// Largest variable index supported by [`VarSet`].
pub const MAX_VARS: u16 = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u16);

impl Var {
    pub const ALPHA: Var = Var(0);
    pub const BETA: Var = Var(1);
    pub const GAMMA: Var = Var(2);
    pub const DELTA: Var = Var(3);
    pub const ETA: Var = Var(4);
    pub const LAM: Var = Var(5);
    pub const L1: Var = Var(6);
    pub const L2: Var = Var(7);
    pub const L3: Var = Var(8);
    pub const LBAR: Var = Var(9);

    /// The components of the soliton vector field, `V = l1 e1 + l2 e2 + l3 e3`.
    pub const FIELD: [Var; 3] = [Var::L1, Var::L2, Var::L3];

    /// Auxiliary variable `t{n}`, `n >= 1`.
    pub fn aux(n: u16) -> Var {
        assert!(n >= 1, "auxiliary variables are numbered from 1");
        Var(BASE_COUNT + n - 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_aux(self) -> bool {
        self.0 >= BASE_COUNT
    }

    /// Auxiliary number `n` of `t{n}`, if this is an auxiliary variable.
    pub fn aux_number(self) -> Option<u16> {
        self.is_aux().then(|| self.0 - BASE_COUNT + 1)
    }

    pub fn name(self) -> String {
        match self.aux_number() {
            None => BASE_SYMBOLS[self.index()].to_string(),
            Some(n) => format!("t{n}"),
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        if let Some(i) = BASE_SYMBOLS.iter().position(|s| *s == name) {
            return Some(Var(i as u16));
        }
        let digits = name.strip_prefix('t')?;
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n: u16 = digits.parse().ok()?;
        (n >= 1 && BASE_COUNT + n - 1 < MAX_VARS).then(|| Var::aux(n))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A small set of variables, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct VarSet(pub u64);

impl VarSet {
    pub fn empty() -> Self {
        VarSet(0)
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 >> v.0 & 1 == 1
    }

    pub fn insert(&mut self, v: Var) {
        assert!(v.0 < MAX_VARS);
        self.0 |= 1 << v.0;
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        (0..MAX_VARS).filter(move |i| self.0 >> i & 1 == 1).map(Var)
    }
}

impl FromIterator<Var> for VarSet {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        let mut s = VarSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for i in 0..20 {
            let v = Var(i);
            assert_eq!(Var::from_name(&v.name()), Some(v));
        }
        assert_eq!(Var::aux(1).name(), "t1");
        assert_eq!(Var::from_name("t0"), None);
        assert_eq!(Var::from_name("t01"), None);
        assert_eq!(Var::from_name("x"), None);
    }

    #[test]
    fn aux_after_base() {
        for n in 1..5 {
            assert!(Var::aux(n) > Var::LBAR);
        }
    }
}
