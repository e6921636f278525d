//! Packed exponent vectors.
//!
//! One byte per slot: slots `0..MAIN_SLOTS` hold the main variables of a
//! series, the last five hold λ₀..λ₄.

use std::fmt;

pub const SLOTS: usize = 16;
pub const MAIN_SLOTS: usize = 11;
pub const LAMBDA_SLOT: usize = MAIN_SLOTS;
pub const LAMBDA_COUNT: usize = 5;

const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;
const MAIN_MASK: u128 = (1u128 << (8 * MAIN_SLOTS)) - 1;

/// Sato weight of λⱼ.
pub const fn lambda_weight(j: usize) -> i64 {
    -(15 - 3 * j as i64)
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_parts(main: &[u32], lambda: &[u32]) -> Monomial {
        assert!(main.len() <= MAIN_SLOTS && lambda.len() <= LAMBDA_COUNT);
        let mut m = Monomial::ONE;
        for (i, &e) in main.iter().enumerate() {
            m = m.with(i, e);
        }
        for (j, &e) in lambda.iter().enumerate() {
            m = m.with(LAMBDA_SLOT + j, e);
        }
        m
    }

    pub fn var(slot: usize) -> Monomial {
        Monomial::ONE.with(slot, 1)
    }

    pub fn lambda(j: usize) -> Monomial {
        Monomial::var(LAMBDA_SLOT + j)
    }

    #[inline]
    pub fn exp(self, slot: usize) -> u32 {
        ((self.0 >> (8 * slot)) & 0xff) as u32
    }

    #[inline]
    pub fn lambda_exp(self, j: usize) -> u32 {
        self.exp(LAMBDA_SLOT + j)
    }

    #[inline]
    pub fn with(self, slot: usize, e: u32) -> Monomial {
        assert!(e < 256, "exponent {e} overflows a monomial slot");
        let shift = 8 * slot;
        Monomial((self.0 & !(0xffu128 << shift)) | ((e as u128) << shift))
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        if (self.0 | other.0) & HIGH_BITS == 0 {
            return Monomial(self.0 + other.0);
        }
        let mut out = Monomial::ONE;
        for s in 0..SLOTS {
            out = out.with(s, self.exp(s) + other.exp(s));
        }
        out
    }

    /// `self / other` when every exponent of `other` is at most that of `self`.
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        let mut out = Monomial::ONE;
        for s in 0..SLOTS {
            let (a, b) = (self.exp(s), other.exp(s));
            if b > a {
                return None;
            }
            out = out.with(s, a - b);
        }
        Some(out)
    }

    pub fn main_part(self) -> Monomial {
        Monomial(self.0 & MAIN_MASK)
    }

    pub fn lambda_part(self) -> Monomial {
        Monomial(self.0 & !MAIN_MASK)
    }

    pub fn has_lambda(self) -> bool {
        self.0 & !MAIN_MASK != 0
    }

    pub fn lambda_exps(self) -> [u32; LAMBDA_COUNT] {
        std::array::from_fn(|j| self.lambda_exp(j))
    }

    pub fn main_exps(self, arity: usize) -> Vec<u32> {
        (0..arity).map(|i| self.exp(i)).collect()
    }

    pub fn main_degree(self) -> u32 {
        (0..MAIN_SLOTS).map(|i| self.exp(i)).sum()
    }

    pub fn lambda_degree(self) -> u32 {
        (0..LAMBDA_COUNT).map(|j| self.lambda_exp(j)).sum()
    }

    /// λ-weight of the λ part.
    pub fn lambda_weight(self) -> i64 {
        (0..LAMBDA_COUNT)
            .map(|j| self.lambda_exp(j) as i64 * lambda_weight(j))
            .sum()
    }

    pub fn raw(self) -> u128 {
        self.0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let main: Vec<u32> = (0..MAIN_SLOTS).map(|i| self.exp(i)).collect();
        write!(f, "{:?}λ{:?}", main, self.lambda_exps())
    }
}

/// Every λ-monomial of the given λ-weight (a non-positive multiple of 3).
pub fn lambda_monomials_of_weight(weight: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if weight > 0 {
        return out;
    }
    fn rec(j: usize, remaining: i64, cur: Monomial, out: &mut Vec<Monomial>) {
        if j == LAMBDA_COUNT {
            if remaining == 0 {
                out.push(cur);
            }
            return;
        }
        let w = -lambda_weight(j);
        let mut e = 0;
        while e as i64 * w <= remaining {
            rec(j + 1, remaining - e as i64 * w, cur.with(LAMBDA_SLOT + j, e), out);
            e += 1;
        }
    }
    rec(0, -weight, Monomial::ONE, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_and_multiply() {
        let a = Monomial::from_parts(&[1, 2, 0, 3], &[0, 0, 0, 0, 1]);
        let b = Monomial::from_parts(&[0, 1, 4, 0], &[1, 0, 0, 0, 0]);
        let c = a.mul(b);
        assert_eq!(c.main_exps(4), vec![1, 3, 4, 3]);
        assert_eq!(c.lambda_exps(), [1, 0, 0, 0, 1]);
        assert_eq!(c.div(b), Some(a));
        assert_eq!(b.div(a), None);
    }

    #[test]
    fn carries_beyond_high_bit() {
        let a = Monomial::ONE.with(2, 200);
        let b = Monomial::ONE.with(2, 50);
        assert_eq!(a.mul(b).exp(2), 250);
        assert_eq!(a.mul(b).exp(3), 0);
    }

    #[test]
    fn lambda_monomial_counts() {
        let counts: Vec<usize> = (0..8).map(|m| lambda_monomials_of_weight(-3 * m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 10, 13]);
        assert!(lambda_monomials_of_weight(-4).is_empty());
        assert_eq!(lambda_monomials_of_weight(-3), vec![Monomial::lambda(4)]);
    }
}
