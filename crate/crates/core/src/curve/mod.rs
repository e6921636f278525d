//! Polynomial algebra on `y³ = x⁵ + λ₄x⁴ + λ₃x³ + λ₂x² + λ₁x + λ₀` and its
//! copy in `(z, w)`.

pub mod fraction;
pub mod jacobi;
pub mod klein;

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::grading::monomial::{Monomial, LAMBDA_COUNT};
use crate::grading::series::{WeightedSeries, Window};
use crate::grading::varspec::VarSpec;
use crate::grading::LambdaPoly;
use crate::rational::Rational;

pub use fraction::CurveFraction;
pub use klein::{build_omega, build_r, check_r, klein_f, DifferentialSet, EtaVariant, KleinCheck, RConfig, RDerivative};
pub use jacobi::{jacobi_polynomial, JacobiPolynomial};

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const W: usize = 3;

/// The curve constants; `None` means symbolic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CurveParams {
    pub lambdas: [Option<Rational>; LAMBDA_COUNT],
}

impl CurveParams {
    pub fn symbolic() -> Self {
        CurveParams::default()
    }

    pub fn numeric(values: [Rational; LAMBDA_COUNT]) -> Self {
        CurveParams {
            lambdas: values.map(Some),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.lambdas.iter().all(Option::is_none)
    }

    pub fn specialize(&self, s: &WeightedSeries) -> WeightedSeries {
        if self.is_symbolic() {
            return s.clone();
        }
        s.specialize(&self.lambdas)
    }

    pub fn specialize_lambda(&self, p: &LambdaPoly) -> LambdaPoly {
        if self.is_symbolic() {
            return p.clone();
        }
        p.specialize(&self.lambdas)
    }

    /// Short label used in provenance records, e.g. `l0=sym,l1=0,...`.
    pub fn label(&self) -> String {
        self.lambdas
            .iter()
            .enumerate()
            .map(|(j, v)| match v {
                None => format!("l{j}=sym"),
                Some(r) => format!("l{j}={r}"),
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `x⁵ + λ₄x⁴ + … + λ₀` in the variable at `slot`, symbolic λ.
pub fn quintic(slot: usize) -> WeightedSeries {
    let spec = VarSpec::curve();
    let mut terms = vec![(Monomial::var(slot).with(slot, 5), Rational::one())];
    for j in 0..LAMBDA_COUNT {
        terms.push((Monomial::lambda(j).with(slot, j as u32), Rational::one()));
    }
    WeightedSeries::from_terms(spec, terms, Window::Exact)
}

/// Polynomial in x, y, z, w reduced modulo both curve equations.
#[derive(Clone, PartialEq)]
pub struct CurvePoly(WeightedSeries);

thread_local! {
    static QUINTIC_POWERS: std::cell::RefCell<FxHashMap<(usize, u32), WeightedSeries>> =
        std::cell::RefCell::new(FxHashMap::default());
}

fn quintic_power(slot: usize, e: u32) -> WeightedSeries {
    QUINTIC_POWERS.with(|cache| {
        if let Some(p) = cache.borrow().get(&(slot, e)) {
            return p.clone();
        }
        let p = quintic(slot).pow(e).expect("same variable set");
        cache.borrow_mut().insert((slot, e), p.clone());
        p
    })
}

/// Brings a polynomial in x, y, z, w to the normal form with y- and
/// w-degree at most two.
pub fn reduce_mod_curve(p: &WeightedSeries) -> Result<CurvePoly> {
    if **p.spec() != *VarSpec::curve() {
        return Err(Error::SpecMismatch("curve polynomials use x, y, z, w".into()));
    }
    let spec = VarSpec::curve();
    let mut out: FxHashMap<Monomial, Rational> = FxHashMap::default();
    for (m, c) in p.iter() {
        let (ey, ew) = (m.exp(Y), m.exp(W));
        if ey < 3 && ew < 3 {
            *out.entry(*m).or_default() += c;
            continue;
        }
        let base = m.with(Y, ey % 3).with(W, ew % 3);
        let mut factor = WeightedSeries::from_terms(spec.clone(), [(base, c.clone())], Window::Exact);
        if ey >= 3 {
            factor = factor.mul(&quintic_power(X, ey / 3))?;
        }
        if ew >= 3 {
            factor = factor.mul(&quintic_power(Z, ew / 3))?;
        }
        for (m2, c2) in factor.iter() {
            *out.entry(*m2).or_default() += c2;
        }
    }
    Ok(CurvePoly(WeightedSeries::from_terms(spec, out, Window::Exact)))
}

impl CurvePoly {
    pub fn zero() -> Self {
        CurvePoly(WeightedSeries::zero(VarSpec::curve(), Window::Exact))
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        CurvePoly(WeightedSeries::constant(VarSpec::curve(), c))
    }

    pub fn var(slot: usize) -> Self {
        CurvePoly(WeightedSeries::var(VarSpec::curve(), slot))
    }

    pub fn lambda(j: usize) -> Self {
        CurvePoly(WeightedSeries::from_lambda_poly(VarSpec::curve(), &LambdaPoly::lambda(j)))
    }

    /// Sum of `c · x^a y^b z^c w^d · λ^e` terms; reduced.
    pub fn from_terms(terms: impl IntoIterator<Item = ([u32; 4], [u32; LAMBDA_COUNT], Rational)>) -> Self {
        let s = WeightedSeries::from_terms(
            VarSpec::curve(),
            terms
                .into_iter()
                .map(|(e, l, c)| (Monomial::from_parts(&e, &l), c)),
            Window::Exact,
        );
        reduce_mod_curve(&s).expect("curve variable set")
    }

    pub fn series(&self) -> &WeightedSeries {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        CurvePoly(self.0.add(&o.0).expect("curve variable set"))
    }

    pub fn sub(&self, o: &Self) -> Self {
        CurvePoly(self.0.sub(&o.0).expect("curve variable set"))
    }

    pub fn neg(&self) -> Self {
        CurvePoly(self.0.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CurvePoly(self.0.scale(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        reduce_mod_curve(&self.0.mul(&o.0).expect("curve variable set")).expect("curve variable set")
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Plain partial derivative of the normal-form representative.
    pub fn partial(&self, slot: usize) -> Self {
        reduce_mod_curve(&self.0.derivative(slot).expect("slot in range")).expect("curve variable set")
    }

    /// Exchanges `(x, y)` with `(z, w)`.
    pub fn swap(&self) -> Self {
        CurvePoly(self.0.embed(VarSpec::curve(), &[Z, W, X, Y]).expect("same weights"))
    }

    /// Sets `(z, w) = (x, y)` and reduces.
    pub fn diagonal(&self) -> Self {
        let spec = VarSpec::curve();
        let terms = self.0.iter().map(|(m, c)| {
            let d = m
                .with(X, m.exp(X) + m.exp(Z))
                .with(Y, m.exp(Y) + m.exp(W))
                .with(Z, 0)
                .with(W, 0);
            (d, c.clone())
        });
        let s = WeightedSeries::from_terms(spec, terms, Window::Exact);
        reduce_mod_curve(&s).expect("curve variable set")
    }

    /// Substitutes numeric λ's. The result is for inspection: further
    /// products reduce with the symbolic curve.
    pub fn specialize(&self, params: &CurveParams) -> Self {
        CurvePoly(params.specialize(&self.0))
    }

    /// Distinct total weights of the terms; a single entry means homogeneous.
    pub fn weights(&self) -> Vec<i64> {
        self.0.total_weights()
    }

    /// Image under `y ↦ ζᵏy` (and `w ↦ ζᵏw`), split by the ζ-phase carried by
    /// each monomial. Entry `p` of the result collects the terms with phase `p`.
    pub fn cyclic_action(&self, k: u32) -> [CurvePoly; 3] {
        let mut parts: [Vec<(Monomial, Rational)>; 3] = Default::default();
        for (m, c) in self.0.iter() {
            let phase = (k * (m.exp(Y) + m.exp(W))) % 3;
            parts[phase as usize].push((*m, c.clone()));
        }
        parts.map(|terms| {
            CurvePoly(WeightedSeries::from_terms(VarSpec::curve(), terms, Window::Exact))
        })
    }

    /// The single phase of a cyclic image, if it is uniform.
    pub fn uniform_phase(&self, k: u32) -> Option<u32> {
        let parts = self.cyclic_action(k);
        let nonzero: Vec<usize> = (0..3).filter(|&p| !parts[p].is_zero()).collect();
        match nonzero.as_slice() {
            [] => Some(0),
            [p] => Some(*p as u32),
            _ => None,
        }
    }
}

impl fmt::Display for CurvePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CurvePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The curve polynomial `f(x, y) = y³ − (x⁵ + … + λ₀)` before reduction.
pub fn curve_equation(xs: usize, ys: usize) -> WeightedSeries {
    let spec: Arc<VarSpec> = VarSpec::curve();
    let y3 = WeightedSeries::from_terms(spec, [(Monomial::var(ys).with(ys, 3), Rational::one())], Window::Exact);
    y3.sub(&quintic(xs)).expect("same variable set")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: [u32; 4]) -> Monomial {
        Monomial::from_parts(&e, &[])
    }

    #[test]
    fn y_cubed_reduces_to_the_quintic() {
        let y3 = WeightedSeries::from_terms(VarSpec::curve(), [(m([0, 3, 0, 0]), Rational::one())], Window::Exact);
        let r = reduce_mod_curve(&y3).unwrap();
        assert_eq!(r.series(), &quintic(X));
        let y2 = CurvePoly::var(Y).pow(2);
        assert_eq!(y2.series().len(), 1);
        let y4 = CurvePoly::var(Y).pow(4);
        assert_eq!(y4, CurvePoly(quintic(X)).mul(&CurvePoly::var(Y)));
    }

    #[test]
    fn reduction_is_idempotent() {
        let p = CurvePoly::var(Y).pow(7).add(&CurvePoly::var(W).pow(5).mul(&CurvePoly::var(X)));
        let again = reduce_mod_curve(p.series()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn cyclic_phases() {
        let f = reduce_mod_curve(&curve_equation(X, Y)).unwrap();
        assert!(f.is_zero());
        let raw = CurvePoly(curve_equation(X, Y));
        assert_eq!(raw.uniform_phase(1), Some(0));
        assert_eq!(CurvePoly::var(Y).uniform_phase(1), Some(1));
        assert_eq!(CurvePoly::var(Y).pow(2).uniform_phase(1), Some(2));
        let p = CurvePoly::var(Y).pow(2);
        for j in 0..3 {
            for k in 0..3 {
                let sum = p.uniform_phase(j).unwrap() + p.uniform_phase(k).unwrap();
                assert_eq!(sum % 3, p.uniform_phase(j + k).unwrap());
            }
        }
    }

    #[test]
    fn curve_equation_is_homogeneous() {
        assert_eq!(CurvePoly(curve_equation(X, Y)).weights(), vec![-15]);
    }
}
