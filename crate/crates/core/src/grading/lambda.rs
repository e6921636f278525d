use std::collections::BTreeMap;
use std::fmt;

use crate::grading::monomial::{Monomial, LAMBDA_COUNT, LAMBDA_SLOT};
use crate::rational::Rational;

/// Sparse polynomial in λ₀..λ₄ with rational coefficients.
///
/// Monomials only use the λ slots; terms are kept sorted and nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        debug_assert!(m.main_part() == Monomial::ONE);
        if c.is_zero() {
            return Self::zero();
        }
        LambdaPoly {
            terms: vec![(m, c)],
        }
    }

    /// The indeterminate λⱼ.
    pub fn lambda(j: usize) -> Self {
        Self::monomial(Monomial::lambda(j), Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_default() += &c;
        }
        LambdaPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(&m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// The constant term when the polynomial has no λ-dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if *m == Monomial::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a.1 + &b.1;
                    if !s.is_zero() {
                        out.push((a.0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        LambdaPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        LambdaPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LambdaPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                map.entry(a.mul(*b)).or_default().add_mul(ca, cb);
            }
        }
        LambdaPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes values for the λ's marked `Some`; the rest stay symbolic.
    pub fn specialize(&self, values: &[Option<Rational>; LAMBDA_COUNT]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut mono = *m;
            let mut coef = c.clone();
            for (j, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    let e = m.lambda_exp(j);
                    if e > 0 {
                        coef = &coef * &v.pow(e as i32);
                        mono = mono.with(LAMBDA_SLOT + j, 0);
                    }
                }
            }
            (mono, coef)
        }))
    }

    /// The λ-weights present, deduplicated and sorted.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.terms.iter().map(|(m, _)| m.lambda_weight()).collect();
        w.sort_unstable();
        w.dedup();
        w
    }
}

pub(crate) fn write_lambda_monomial(f: &mut impl fmt::Write, m: Monomial) -> fmt::Result {
    let mut first = true;
    for j in 0..LAMBDA_COUNT {
        let e = m.lambda_exp(j);
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        if e == 1 {
            write!(f, "l{j}")?;
        } else {
            write!(f, "l{j}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                write_lambda_monomial(f, *m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let l4 = LambdaPoly::lambda(4);
        let l3 = LambdaPoly::lambda(3);
        let a = l4.add(&l3);
        let sq = a.mul(&a);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(Monomial::lambda(3).mul(Monomial::lambda(4))), Rational::from_int(2));
        assert!(a.sub(&a).is_zero());
        assert_eq!(sq.weights(), vec![-12, -9, -6]);
    }

    #[test]
    fn specialization() {
        let p = LambdaPoly::lambda(4).mul(&LambdaPoly::lambda(4)).add(&LambdaPoly::lambda(0));
        let mut vals: [Option<Rational>; 5] = Default::default();
        vals[4] = Some(Rational::new(1, 2));
        let s = p.specialize(&vals);
        assert_eq!(s.coeff(Monomial::ONE), Rational::new(1, 4));
        assert_eq!(s.coeff(Monomial::lambda(0)), Rational::one());
        assert_eq!(s.to_string(), "1/4 + l0");
    }
}
