//! Sparse truncated series graded by main-variable Sato weight.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::grading::lambda::LambdaPoly;
use crate::grading::monomial::{Monomial, LAMBDA_COUNT, LAMBDA_SLOT};
use crate::grading::varspec::VarSpec;
use crate::rational::Rational;

/// Upper end of the range of main weights in which a series is known exactly.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    Exact,
    Upto(i64),
}

impl Window {
    pub fn min(self, other: Window) -> Window {
        match (self, other) {
            (Window::Exact, w) | (w, Window::Exact) => w,
            (Window::Upto(a), Window::Upto(b)) => Window::Upto(a.min(b)),
        }
    }

    pub fn shift(self, by: i64) -> Window {
        match self {
            Window::Exact => Window::Exact,
            Window::Upto(a) => Window::Upto(a + by),
        }
    }

    #[inline]
    pub fn admits(self, weight: i64) -> bool {
        match self {
            Window::Exact => true,
            Window::Upto(a) => weight <= a,
        }
    }

    pub fn value(self) -> Option<i64> {
        match self {
            Window::Exact => None,
            Window::Upto(a) => Some(a),
        }
    }
}

impl PartialOrd for Window {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Window {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Window::Exact, Window::Exact) => Ordering::Equal,
            (Window::Exact, _) => Ordering::Greater,
            (_, Window::Exact) => Ordering::Less,
            (Window::Upto(a), Window::Upto(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Exact => write!(f, "exact"),
            Window::Upto(a) => write!(f, "{a}"),
        }
    }
}

/// Lower bound on the main weight of any term that may be present, including
/// the untrusted tail starting just above the window.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Floor {
    Infinite,
    At(i64),
}

impl Floor {
    fn add_to(self, w: Window) -> Window {
        match (self, w) {
            (Floor::Infinite, _) | (_, Window::Exact) => Window::Exact,
            (Floor::At(f), Window::Upto(a)) => Window::Upto(a + f),
        }
    }
}

const PARALLEL_THRESHOLD: usize = 1 << 16;

/// A truncated series in the main variables of a [`VarSpec`], with
/// coefficients polynomial in λ₀..λ₄.
///
/// Terms are stored flat: each key carries both the main exponents and the
/// λ exponents, so a main monomial with a λ-polynomial coefficient occupies
/// one entry per λ-monomial.
#[derive(Clone)]
pub struct WeightedSeries {
    spec: Arc<VarSpec>,
    terms: FxHashMap<Monomial, Rational>,
    window: Window,
}

impl WeightedSeries {
    pub fn zero(spec: Arc<VarSpec>, window: Window) -> Self {
        WeightedSeries {
            spec,
            terms: FxHashMap::default(),
            window,
        }
    }

    pub fn one(spec: Arc<VarSpec>) -> Self {
        Self::constant(spec, Rational::one())
    }

    pub fn constant(spec: Arc<VarSpec>, c: Rational) -> Self {
        Self::from_terms(spec, [(Monomial::ONE, c)], Window::Exact)
    }

    /// The main variable in slot `i`, exactly.
    pub fn var(spec: Arc<VarSpec>, i: usize) -> Self {
        assert!(i < spec.arity());
        Self::from_terms(spec, [(Monomial::var(i), Rational::one())], Window::Exact)
    }

    pub fn from_lambda_poly(spec: Arc<VarSpec>, p: &LambdaPoly) -> Self {
        Self::from_terms(spec, p.terms().iter().cloned(), Window::Exact)
    }

    /// Collects terms, merging duplicates and dropping zeros and anything
    /// outside the window.
    pub fn from_terms(
        spec: Arc<VarSpec>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
        window: Window,
    ) -> Self {
        let mut map: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            if window.admits(spec.main_weight(m)) {
                *map.entry(m).or_default() += &c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        WeightedSeries {
            spec,
            terms: map,
            window,
        }
    }

    pub fn spec(&self) -> &Arc<VarSpec> {
        &self.spec
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term is stored. Says nothing about weights above the window.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn main_weight(&self, m: Monomial) -> i64 {
        self.spec.main_weight(m)
    }

    /// Terms in canonical order: main weight, then main exponents, then λ exponents.
    pub fn sorted_terms(&self) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<(Monomial, Rational)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let spec = &self.spec;
        let arity = spec.arity();
        v.sort_by(|(a, _), (b, _)| {
            spec.main_weight(*a)
                .cmp(&spec.main_weight(*b))
                .then_with(|| a.main_exps(arity).cmp(&b.main_exps(arity)))
                .then_with(|| a.lambda_exps().cmp(&b.lambda_exps()))
        });
        v
    }

    /// Smallest main weight of a stored term.
    pub fn min_term_weight(&self) -> Option<i64> {
        self.terms.keys().map(|m| self.spec.main_weight(*m)).min()
    }

    pub fn max_term_weight(&self) -> Option<i64> {
        self.terms.keys().map(|m| self.spec.main_weight(*m)).max()
    }

    fn floor(&self) -> Floor {
        let stored = self.min_term_weight();
        match (stored, self.window) {
            (None, Window::Exact) => Floor::Infinite,
            (Some(a), Window::Exact) => Floor::At(a),
            (None, Window::Upto(w)) => Floor::At(w + 1),
            (Some(a), Window::Upto(w)) => Floor::At(a.min(w + 1)),
        }
    }

    /// Least weight of any term that may be present (stored or untrusted tail).
    pub fn effective_min_weight(&self) -> Option<i64> {
        match self.floor() {
            Floor::Infinite => None,
            Floor::At(a) => Some(a),
        }
    }

    fn check_spec(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!(
                "{:?} vs {:?}",
                self.spec.names(),
                other.spec.names()
            )))
        }
    }

    /// Lowers the window, dropping terms above it.
    pub fn truncate(&self, window: Window) -> Self {
        let window = self.window.min(window);
        let spec = self.spec.clone();
        WeightedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| window.admits(spec.main_weight(**m)))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            spec,
            window,
        }
    }

    /// Declares a smaller window without touching terms; used when a caller
    /// knows a tighter bound than the product rule gives.
    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        let spec = self.spec.clone();
        self.terms.retain(|m, _| window.admits(spec.main_weight(*m)));
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_spec(other)?;
        let window = self.window.min(other.window);
        let mut terms = FxHashMap::default();
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if window.admits(self.spec.main_weight(*m)) {
                *terms.entry(*m).or_insert_with(Rational::zero) += c;
            }
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(WeightedSeries {
            spec: self.spec.clone(),
            terms,
            window,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        WeightedSeries {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            window: self.window,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.spec.clone(), self.window);
        }
        WeightedSeries {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
            window: self.window,
        }
    }

    /// Multiplies by a λ-polynomial (main weight zero, exact).
    pub fn scale_lambda(&self, p: &LambdaPoly) -> Self {
        if let Some(c) = p.as_constant() {
            return self.scale(&c);
        }
        let mut terms: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            for (l, lc) in p.terms() {
                terms.entry(m.mul(*l)).or_default().add_mul(c, lc);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        WeightedSeries {
            spec: self.spec.clone(),
            terms,
            window: self.window,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_capped(other, Window::Exact)
    }

    /// Product truncated at the product-rule window, further capped at `cap`.
    pub fn mul_capped(&self, other: &Self, cap: Window) -> Result<Self> {
        self.mul_graded(other, cap, None)
    }

    /// Drops terms whose λ-weight is below `floor`.
    pub fn lambda_truncate(&self, floor: i64) -> Self {
        self.filter(|m| m.lambda_weight() >= floor)
    }

    /// As [`mul_capped`](Self::mul_capped), additionally discarding products
    /// whose λ-weight falls below `lambda_floor`. Those terms form an ideal,
    /// so the surviving coefficients are exact.
    pub fn mul_graded(&self, other: &Self, cap: Window, lambda_floor: Option<i64>) -> Result<Self> {
        self.check_spec(other)?;
        let window = self
            .floor()
            .add_to(other.window)
            .min(other.floor().add_to(self.window))
            .min(cap);
        let spec = self.spec.clone();
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(Self::zero(spec, window));
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let lf = lambda_floor.unwrap_or(i64::MIN);
        fn collect(s: &WeightedSeries, lf: i64) -> Vec<(Monomial, &Rational, i64, i64)> {
            let mut v: Vec<_> = s
                .terms
                .iter()
                .map(|(m, c)| (*m, c, s.spec.main_weight(*m), m.lambda_weight()))
                .filter(|t| t.3 >= lf)
                .collect();
            v.sort_by_key(|t| (t.2, t.0));
            v
        }
        let lhs = collect(small, lf);
        let rhs = collect(large, lf);

        let kernel = |chunk: &[(Monomial, &Rational, i64, i64)]| {
            let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
            for (ma, ca, wa, la) in chunk {
                for (mb, cb, wb, lb) in &rhs {
                    if !window.admits(wa + wb) {
                        break;
                    }
                    if la + lb < lf {
                        continue;
                    }
                    acc.entry(ma.mul(*mb)).or_default().add_mul(ca, cb);
                }
            }
            acc
        };

        let work = lhs.len().saturating_mul(rhs.len());
        let mut terms = if work >= PARALLEL_THRESHOLD && rayon::current_num_threads() > 1 {
            let chunk = lhs.len().div_ceil(rayon::current_num_threads() * 4).max(1);
            let parts: Vec<FxHashMap<Monomial, Rational>> =
                lhs.par_chunks(chunk).map(kernel).collect();
            let mut it = parts.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for part in it {
                for (m, c) in part {
                    *acc.entry(m).or_default() += &c;
                }
            }
            acc
        } else {
            kernel(&lhs)
        };
        terms.retain(|_, c| !c.is_zero());
        Ok(WeightedSeries {
            spec,
            terms,
            window,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        self.pow_capped(e, Window::Exact)
    }

    pub fn pow_capped(&self, e: u32, cap: Window) -> Result<Self> {
        let mut acc = Self::one(self.spec.clone());
        for _ in 0..e {
            acc = acc.mul_capped(self, cap)?;
        }
        Ok(acc)
    }

    /// Partial derivative in main slot `i`; the window drops by the variable's weight.
    pub fn derivative(&self, i: usize) -> Result<Self> {
        if i >= self.spec.arity() {
            return Err(Error::UnknownVariable(format!("slot {i}")));
        }
        let mut terms = FxHashMap::default();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                terms.insert(m.with(i, e - 1), c * &Rational::from_int(e as i64));
            }
        }
        Ok(WeightedSeries {
            spec: self.spec.clone(),
            terms,
            window: self.window.shift(-self.spec.weight(i)),
        })
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<Self> {
        let i = self.spec.index_of(name)?;
        self.derivative(i)
    }

    /// Composes with `images[i]` in place of main variable `i`, results in
    /// the images' variable set. λ exponents are carried through.
    pub fn substitute(&self, images: &[WeightedSeries], cap: Window) -> Result<Self> {
        if images.len() != self.spec.arity() {
            return Err(Error::Arity {
                expected: self.spec.arity(),
                got: images.len(),
            });
        }
        let target = images
            .first()
            .map(|s| s.spec.clone())
            .ok_or_else(|| Error::SpecMismatch("no images".into()))?;
        for img in images {
            if img.spec != target {
                return Err(Error::SpecMismatch("images use different variable sets".into()));
            }
        }
        // Least ratio of image floor to source weight; omitted source terms
        // of weight > W land at weight ≥ ratio·(W+1).
        let mut ratio: Option<Rational> = None;
        for (i, img) in images.iter().enumerate() {
            let wi = self.spec.weight(i);
            match img.floor() {
                Floor::Infinite => {}
                Floor::At(m) => {
                    if m <= 0 || wi <= 0 {
                        return Err(Error::WindowCollapse(format!(
                            "image of {} has non-positive minimum weight",
                            self.spec.names()[i]
                        )));
                    }
                    let r = Rational::new(m, wi);
                    ratio = Some(match ratio {
                        Some(q) if q <= r => q,
                        _ => r,
                    });
                }
            }
        }
        let from_source = match (self.window, &ratio) {
            (Window::Exact, _) | (_, None) => Window::Exact,
            (Window::Upto(w), Some(r)) => {
                let bound = r * &Rational::from_int(w + 1);
                let n = bound.numer();
                let d = bound.denom();
                let ceil = num_integer::Integer::div_ceil(&n, &d);
                let ceil: i64 = num_traits::ToPrimitive::to_i64(&ceil).expect("weight fits i64");
                Window::Upto(ceil - 1)
            }
        };
        let window = from_source.min(cap);

        let mut by_main: FxHashMap<Monomial, LambdaPoly> = FxHashMap::default();
        for (m, c) in &self.terms {
            let e = by_main.entry(m.main_part()).or_default();
            *e = e.add(&LambdaPoly::monomial(m.lambda_part(), c.clone()));
        }
        let mut keys: Vec<Monomial> = by_main.keys().copied().collect();
        keys.sort_by_key(|m| (self.spec.main_weight(*m), *m));

        let mut powers: Vec<Vec<WeightedSeries>> =
            vec![vec![WeightedSeries::one(target.clone())]; images.len()];
        let mut result = WeightedSeries::zero(target.clone(), window);
        for key in keys {
            let mut prod = WeightedSeries::one(target.clone());
            for (i, img) in images.iter().enumerate() {
                let e = key.exp(i) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul_capped(img, window)?;
                    powers[i].push(next);
                }
                if e > 0 {
                    prod = prod.mul_capped(&powers[i][e], window)?;
                }
            }
            let term = prod.scale_lambda(&by_main[&key]);
            result = result.add(&term)?;
        }
        if let (Some(lo), Window::Upto(w)) = (self.min_term_weight(), result.window) {
            if let Some(r) = &ratio {
                let lowest = r * &Rational::from_int(lo);
                if Rational::from_int(w) < lowest {
                    return Err(Error::WindowCollapse(
                        "substitution leaves no trustworthy term".into(),
                    ));
                }
            }
        }
        Ok(result)
    }

    /// Re-labels main variables into another variable set: slot `i` of self
    /// becomes slot `slots[i]` of `target`. Weights must agree.
    pub fn embed(&self, target: Arc<VarSpec>, slots: &[usize]) -> Result<Self> {
        if slots.len() != self.spec.arity() {
            return Err(Error::Arity {
                expected: self.spec.arity(),
                got: slots.len(),
            });
        }
        for (i, &s) in slots.iter().enumerate() {
            if target.weight(s) != self.spec.weight(i) {
                return Err(Error::SpecMismatch(format!(
                    "weight of {} differs from {}",
                    self.spec.names()[i],
                    target.names()[s]
                )));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = m.lambda_part();
                for (i, &s) in slots.iter().enumerate() {
                    out = out.with(s, m.exp(i));
                }
                (out, c.clone())
            })
            .collect();
        Ok(WeightedSeries {
            spec: target,
            terms,
            window: self.window,
        })
    }

    /// Substitutes numeric values for the λ's marked `Some`.
    pub fn specialize(&self, values: &[Option<Rational>; LAMBDA_COUNT]) -> Self {
        let mut terms: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
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
            *terms.entry(mono).or_default() += &coef;
        }
        terms.retain(|_, c| !c.is_zero());
        WeightedSeries {
            spec: self.spec.clone(),
            terms,
            window: self.window,
        }
    }

    /// Keeps only the terms of one main weight.
    pub fn part_of_weight(&self, w: i64) -> Self {
        let spec = self.spec.clone();
        WeightedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| spec.main_weight(**m) == w)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            spec,
            window: self.window,
        }
    }

    pub fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Self {
        WeightedSeries {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            window: self.window,
        }
    }

    /// Coefficient of a main monomial as a λ-polynomial.
    pub fn lambda_coefficient(&self, main: Monomial) -> LambdaPoly {
        let main = main.main_part();
        LambdaPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.main_part() == main)
                .map(|(m, c)| (m.lambda_part(), c.clone())),
        )
    }

    /// Distinct total weights (main + λ) of the stored terms.
    pub fn total_weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self
            .terms
            .keys()
            .map(|m| self.spec.total_weight(*m))
            .collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Equality of stored terms inside the common window.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        let w = self.window.min(other.window);
        Ok(self.truncate(w).sub(&other.truncate(w))?.is_zero())
    }

    pub fn into_terms(self) -> FxHashMap<Monomial, Rational> {
        self.terms
    }
}

impl PartialEq for WeightedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.window == other.window && self.terms == other.terms
    }
}

impl fmt::Debug for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [window {}]", self.window)
    }
}

impl fmt::Display for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, name) in self.spec.names().iter().enumerate() {
                match m.exp(i) {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    e => write!(f, "*{name}^{e}")?,
                }
            }
            if m.has_lambda() {
                write!(f, "*")?;
                crate::grading::lambda::write_lambda_monomial(f, *m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Arc<VarSpec> {
        VarSpec::u()
    }

    fn mono(e: [u32; 4]) -> Monomial {
        Monomial::from_parts(&e, &[])
    }

    fn s_poly() -> WeightedSeries {
        let r = Rational::new;
        WeightedSeries::from_terms(
            u(),
            [
                (mono([0, 0, 0, 8]), r(1, 448)),
                (mono([0, 2, 0, 0]), r(1, 1)),
                (mono([0, 1, 1, 2]), r(1, 1)),
                (mono([0, 0, 2, 4]), r(-1, 8)),
                (mono([0, 0, 4, 0]), r(-1, 4)),
                (mono([1, 0, 0, 1]), r(-1, 1)),
            ],
            Window::Exact,
        )
    }

    #[test]
    fn window_rule_for_products() {
        let a = WeightedSeries::var(u(), 3).truncate(Window::Upto(5));
        let b = WeightedSeries::var(u(), 3).truncate(Window::Upto(3));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.window(), Window::Upto(4));
        assert_eq!(p.coeff(mono([0, 0, 0, 2])), Rational::one());
        let exact = s_poly().mul(&WeightedSeries::one(u())).unwrap();
        assert_eq!(exact, s_poly());
    }

    #[test]
    fn derivative_examples() {
        let d1 = s_poly().derivative(0).unwrap();
        assert_eq!(d1.len(), 1);
        assert_eq!(d1.coeff(mono([0, 0, 0, 1])), Rational::from_int(-1));
        let d3 = s_poly().derivative(2).unwrap();
        assert_eq!(d3.len(), 3);
        assert_eq!(d3.coeff(mono([0, 1, 0, 2])), Rational::one());
        assert_eq!(d3.coeff(mono([0, 0, 1, 4])), Rational::new(-1, 4));
        assert_eq!(d3.coeff(mono([0, 0, 3, 0])), Rational::from_int(-1));
    }

    #[test]
    fn lambda_zero_abel_map_kills_schur_weierstrass() {
        let t = VarSpec::t1();
        let r = Rational::new;
        let img = |e: u32, c: Rational| WeightedSeries::from_terms(t.clone(), [(Monomial::var(0).with(0, e), c)], Window::Exact);
        let images = [img(7, r(1, 7)), img(4, r(-1, 4)), img(2, r(-1, 2)), img(1, r(1, 1))];
        let out = s_poly().substitute(&images, Window::Exact).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn substitution_window_tracks_truncated_images() {
        let t = VarSpec::t1();
        let img = WeightedSeries::var(t.clone(), 0).truncate(Window::Upto(10));
        let images = [img.clone(), img.clone(), img.clone(), img];
        let sq = WeightedSeries::var(u(), 3).pow(2).unwrap();
        let out = sq.substitute(&images, Window::Exact).unwrap();
        assert_eq!(out.window(), Window::Upto(11));
    }

    #[test]
    fn truncation_and_lambda_scaling() {
        let s = s_poly().truncate(Window::Upto(8));
        assert_eq!(s.len(), 6);
        let l = s.scale_lambda(&LambdaPoly::lambda(4));
        assert_eq!(l.total_weights(), vec![5]);
        assert_eq!(l.window(), Window::Upto(8));
    }
}
