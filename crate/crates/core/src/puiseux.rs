//! Expansions at the point at infinity in the local parameter `t = u₄`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveParams, CurvePoly, DifferentialSet, EtaVariant, W, X, Y, Z};
use crate::error::{Error, Result};
use crate::grading::monomial::{Monomial, LAMBDA_COUNT};
use crate::grading::series::{WeightedSeries, Window};
use crate::grading::varspec::VarSpec;
use crate::grading::LambdaPoly;
use crate::rational::Rational;

/// Laurent series `Σ cₖ tᵏ` known for `start ≤ k < order`.
#[derive(Clone)]
pub struct LocalSeries {
    start: i64,
    coeffs: Vec<LambdaPoly>,
}

impl PartialEq for LocalSeries {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = (self.clone().normalized(), o.clone().normalized());
        a.start == b.start && a.coeffs == b.coeffs
    }
}

impl Eq for LocalSeries {}

impl Default for LocalSeries {
    fn default() -> Self {
        LocalSeries::zero(0)
    }
}

impl LocalSeries {
    pub fn new(start: i64, coeffs: Vec<LambdaPoly>) -> Self {
        LocalSeries { start, coeffs }
    }

    /// `c · tᵏ` known up to (excluding) `t^order`.
    pub fn monomial(k: i64, c: LambdaPoly, order: i64) -> Self {
        let len = (order - k).max(0) as usize;
        let mut coeffs = vec![LambdaPoly::zero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        LocalSeries { start: k, coeffs }
    }

    pub fn zero(order: i64) -> Self {
        LocalSeries { start: order, coeffs: Vec::new() }
    }

    /// A polynomial in `t`, padded with zeros up to `order`.
    pub fn polynomial(terms: &[(i64, LambdaPoly)], order: i64) -> Self {
        let start = terms.iter().map(|(k, _)| *k).min().unwrap_or(order).min(order);
        let mut coeffs = vec![LambdaPoly::zero(); (order - start) as usize];
        for (k, c) in terms {
            if *k < order {
                let i = (k - start) as usize;
                coeffs[i] = coeffs[i].add(c);
            }
        }
        LocalSeries { start, coeffs }.normalized()
    }

    /// First exponent that is not known.
    pub fn order(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Exponent of the first stored coefficient.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.start + i as i64)
    }

    /// Coefficient of `tᵏ`; `None` past the known range.
    pub fn coeff(&self, k: i64) -> Option<LambdaPoly> {
        if k >= self.order() {
            return None;
        }
        if k < self.start {
            return Some(LambdaPoly::zero());
        }
        Some(self.coeffs[(k - self.start) as usize].clone())
    }

    /// Drops leading zero coefficients.
    pub fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        self
    }

    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        let keep = (order - self.start).max(0) as usize;
        LocalSeries {
            start: self.start.min(order),
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let start = self.start.min(o.start).min(order);
        let coeffs = (start..order)
            .map(|k| self.coeff(k).unwrap().add(&o.coeff(k).unwrap()))
            .collect();
        LocalSeries { start, coeffs }.normalized()
    }

    pub fn neg(&self) -> Self {
        LocalSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(LambdaPoly::neg).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.scale_lambda(&LambdaPoly::constant(c.clone()))
    }

    pub fn scale_lambda(&self, p: &LambdaPoly) -> Self {
        LocalSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
        .normalized()
    }

    /// Multiplication by `tᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        LocalSeries {
            start: self.start + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Product with relative precision: the known length is the shorter of
    /// the two after stripping leading zeros.
    pub fn mul(&self, o: &Self) -> Self {
        let a = self.clone().normalized();
        let b = o.clone().normalized();
        let n = a.coeffs.len().min(b.coeffs.len());
        let mut coeffs = vec![LambdaPoly::zero(); n];
        for (i, ai) in a.coeffs.iter().take(n).enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().take(n - i).enumerate() {
                if !bj.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&ai.mul(bj));
                }
            }
        }
        LocalSeries {
            start: a.start + b.start,
            coeffs,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let a = self.clone().normalized();
        let mut acc = LocalSeries::monomial(0, LambdaPoly::one(), a.coeffs.len() as i64);
        for _ in 0..e {
            acc = acc.mul(&a);
        }
        acc
    }

    /// `selfᵅ` for rational α. The leading coefficient must be `±1` (with an
    /// odd denominator for `−1`) and `α·valuation` must be an integer.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Self> {
        let a = self.clone().normalized();
        if a.coeffs.is_empty() {
            return Err(Error::NotDivisible("power of a series with no known nonzero term".into()));
        }
        let lead = a.coeffs[0]
            .as_constant()
            .ok_or_else(|| Error::NotDivisible("leading coefficient is not a constant".into()))?;
        let lead_pow = if lead.is_one() {
            Rational::one()
        } else if lead == Rational::from_int(-1) && alpha.denom().is_odd() {
            Rational::from_int(if alpha.numer().is_odd() { -1 } else { 1 })
        } else {
            return Err(Error::NotDivisible(format!("cannot raise leading coefficient {lead} to {alpha}")));
        };
        let shifted = alpha * &Rational::from_int(a.start);
        if !shifted.is_integer() {
            return Err(Error::NotDivisible(format!("t^{} to the power {alpha}", a.start)));
        }
        let new_start: i64 = i64::try_from(shifted.numer()).map_err(|_| Error::NotDivisible("exponent overflow".into()))?;
        let inv_lead = lead.recip();
        let f: Vec<LambdaPoly> = a.coeffs.iter().map(|c| c.scale(&inv_lead)).collect();
        let n = f.len();
        let mut g = vec![LambdaPoly::zero(); n];
        g[0] = LambdaPoly::one();
        for m in 1..n {
            let mut acc = LambdaPoly::zero();
            for k in 1..=m {
                if f[k].is_zero() || g[m - k].is_zero() {
                    continue;
                }
                let w = &(alpha * &Rational::from_int(k as i64)) - &Rational::from_int((m - k) as i64);
                if !w.is_zero() {
                    acc = acc.add(&f[k].mul(&g[m - k]).scale(&w));
                }
            }
            g[m] = acc.scale(&Rational::from_int(m as i64).recip());
        }
        Ok(LocalSeries {
            start: new_start,
            coeffs: g.into_iter().map(|c| c.scale(&lead_pow)).collect(),
        })
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_int(self.start + i as i64)))
            .collect();
        LocalSeries {
            start: self.start - 1,
            coeffs,
        }
        .normalized()
    }

    /// Coefficient of `t⁻¹`.
    pub fn residue(&self) -> Option<LambdaPoly> {
        self.coeff(-1)
    }

    /// Termwise antiderivative with zero constant term.
    pub fn integrate(&self) -> Result<Self> {
        if let Some(r) = self.residue() {
            if !r.is_zero() {
                return Err(Error::NonzeroResidue(r.to_string()));
            }
        }
        let coeffs = (self.start..self.order())
            .map(|k| {
                if k == -1 {
                    LambdaPoly::zero()
                } else {
                    self.coeff(k).unwrap().scale(&Rational::from_int(k + 1).recip())
                }
            })
            .collect();
        let out = LocalSeries {
            start: self.start + 1,
            coeffs,
        };
        if out.start <= 0 && out.order() > 0 {
            let mut c = out.coeffs;
            c[(-out.start) as usize] = LambdaPoly::zero();
            return Ok(LocalSeries { start: out.start, coeffs: c }.normalized());
        }
        Ok(out.normalized())
    }

    /// `self(inner(t))` for a power series `self` and `inner = O(t)`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let v = inner.valuation().unwrap_or(inner.order());
        if v < 1 || self.start < 0 {
            return Err(Error::NotDivisible("composition needs a power series and an inner series without constant term".into()));
        }
        let order = (self.order() * v).min(inner.order());
        let mut acc = LocalSeries::zero(order);
        let mut power = LocalSeries::monomial(0, LambdaPoly::one(), order);
        let mut k = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.start + i as i64;
            if e * v >= order {
                break;
            }
            while k < e {
                power = power.mul(inner).truncate(order);
                k += 1;
            }
            acc = acc.add(&power.scale_lambda(c).truncate(order));
        }
        Ok(acc)
    }

    /// Inverse of `u = t + O(t²)` under composition, by Lagrange inversion:
    /// `[tⁿ] s = (1/n) [s^{n−1}] (s/u)ⁿ`.
    pub fn reversion(&self) -> Result<Self> {
        let lead = self.coeff(1);
        if self.valuation() != Some(1) || lead.and_then(|c| c.as_constant()) != Some(Rational::one()) {
            return Err(Error::NotDivisible("reversion needs a series t + O(t²)".into()));
        }
        let order = self.order();
        let q = self.clone().normalized().shift(-1);
        let mut coeffs = vec![LambdaPoly::zero()];
        for n in 1..order {
            let g = q.truncate(n).pow_rational(&Rational::from_int(-n))?;
            let c = g.coeff(n - 1).expect("n terms kept");
            coeffs.push(c.scale(&Rational::from_int(n).recip()));
        }
        Ok(LocalSeries { start: 0, coeffs }.normalized())
    }

    pub fn specialize(&self, params: &CurveParams) -> Self {
        LocalSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| params.specialize_lambda(c)).collect(),
        }
        .normalized()
    }

    /// As a series in `spec`'s variable at `slot`; requires no principal part.
    pub fn to_weighted(&self, spec: std::sync::Arc<VarSpec>, slot: usize) -> Result<WeightedSeries> {
        if self.valuation().is_some_and(|v| v < 0) {
            return Err(Error::SpecMismatch("series has a principal part".into()));
        }
        let mut terms = Vec::new();
        for k in self.start.max(0)..self.order() {
            let c = self.coeff(k).unwrap();
            for (m, r) in c.terms() {
                terms.push((m.mul(Monomial::var(slot).with(slot, k as u32)), r.clone()));
            }
        }
        let w = spec.weight(slot);
        Ok(WeightedSeries::from_terms(spec, terms, Window::Upto(w * (self.order() - 1))))
    }

    /// The distinct λ-weights plus `k` of each `cₖtᵏ`; a single entry means
    /// homogeneous of that weight.
    pub fn weights(&self) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.start + i as i64;
            out.extend(c.weights().into_iter().map(|w| w + k));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for LocalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*t^{}", self.start + i as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order())
    }
}

impl fmt::Debug for LocalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One `c · λ^e · tᵏ` term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTermJson {
    pub t_exp: i64,
    pub lambda_exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSeriesJson {
    pub vars: Vec<String>,
    pub principal_part: Vec<LocalTermJson>,
    pub terms: Vec<LocalTermJson>,
    /// First exponent that is not known.
    pub order: i64,
}

impl LocalSeriesJson {
    pub fn from_series(s: &LocalSeries) -> Self {
        let mut principal_part = Vec::new();
        let mut terms = Vec::new();
        for (i, c) in s.coeffs.iter().enumerate() {
            let k = s.start + i as i64;
            for (m, r) in c.terms() {
                let t = LocalTermJson {
                    t_exp: k,
                    lambda_exp: m.lambda_exps().to_vec(),
                    num: r.numer().to_string(),
                    den: r.denom().to_string(),
                };
                if k < 0 {
                    principal_part.push(t);
                } else {
                    terms.push(t);
                }
            }
        }
        LocalSeriesJson {
            vars: vec!["t".into()],
            principal_part,
            terms,
            order: s.order(),
        }
    }

    pub fn to_series(&self) -> Result<LocalSeries> {
        if self.vars != ["t"] {
            return Err(Error::Schema("local series use the single variable t".into()));
        }
        let mut parts: Vec<(i64, LambdaPoly)> = Vec::new();
        let tagged = self
            .principal_part
            .iter()
            .map(|t| (t, true))
            .chain(self.terms.iter().map(|t| (t, false)));
        for (t, principal) in tagged {
            if (t.t_exp < 0) != principal || t.t_exp >= self.order {
                return Err(Error::Schema(format!("misplaced term t^{}", t.t_exp)));
            }
            if t.lambda_exp.len() != LAMBDA_COUNT {
                return Err(Error::Schema("lambda_exp needs five entries".into()));
            }
            let c: Rational = format!("{}/{}", t.num, t.den)
                .parse()
                .map_err(|e| Error::Schema(format!("{e}")))?;
            parts.push((t.t_exp, LambdaPoly::monomial(Monomial::from_parts(&[], &t.lambda_exp), c)));
        }
        Ok(LocalSeries::polynomial(&parts, self.order))
    }
}

/// `G(s) = 1 − λ₄s³ + λ₃s⁶ − λ₂s⁹ + λ₁s¹² − λ₀s¹⁵`, with `y³ = −s⁻¹⁵ G(s)` when `x = −s⁻³`.
fn g_polynomial(order: i64) -> LocalSeries {
    let mut terms = vec![(0, LambdaPoly::one())];
    for j in 0..LAMBDA_COUNT {
        let k = 3 * (5 - j as i64);
        let sign = if (5 - j) % 2 == 0 { 1 } else { -1 };
        terms.push((k, LambdaPoly::lambda(j).scale(&Rational::from_int(sign))));
    }
    LocalSeries::polynomial(&terms, order)
}

/// Value of a polynomial in `x, y` (no `z, w`) at the given series.
pub fn eval_curve_poly(p: &CurvePoly, x: &LocalSeries, y: &LocalSeries) -> LocalSeries {
    let s = p.series();
    let mut xp: Vec<LocalSeries> = Vec::new();
    let mut yp: Vec<LocalSeries> = Vec::new();
    let mut acc: Option<LocalSeries> = None;
    for (m, c) in s.sorted_terms() {
        assert!(m.exp(Z) == 0 && m.exp(W) == 0, "expects a polynomial in x and y");
        let (a, b) = (m.exp(X) as usize, m.exp(Y) as usize);
        while xp.len() <= a {
            xp.push(if xp.is_empty() { x.pow(0) } else { xp.last().unwrap().mul(x) });
        }
        while yp.len() <= b {
            yp.push(if yp.is_empty() { y.pow(0) } else { yp.last().unwrap().mul(y) });
        }
        let coef = LambdaPoly::monomial(m.lambda_part(), c);
        let term = xp[a].mul(&yp[b]).scale_lambda(&coef);
        acc = Some(match acc {
            None => term,
            Some(prev) => prev.add(&term),
        });
    }
    acc.unwrap_or_else(|| LocalSeries::zero(x.order().min(y.order())))
}

/// The branch at infinity and the Abel map along it.
#[derive(Clone, Debug)]
pub struct AbelMapSeries {
    pub params: CurveParams,
    /// `uᵢ(t)` known through `t^order`.
    pub order: i64,
    pub x: LocalSeries,
    pub y: LocalSeries,
    pub u: [LocalSeries; 4],
}

/// `x(t), y(t)` with `∫ x² dx / (3y²) = t`, with relative precision `len`.
pub fn expand_curve_at_infinity(params: &CurveParams, len: usize) -> Result<(LocalSeries, LocalSeries)> {
    let (x, y) = symbolic_branch(len as i64)?;
    Ok((x.specialize(params), y.specialize(params)))
}

fn symbolic_branch(len: i64) -> Result<(LocalSeries, LocalSeries)> {
    let g = g_polynomial(len);
    // du₄/ds = G(s)^(−2/3)
    let du = g.pow_rational(&Rational::new(-2, 3))?;
    let u4 = du.integrate()?.truncate(len + 1);
    let s = u4.reversion()?;
    let q = s.shift(-1);
    let x = q.pow_rational(&Rational::from_int(-3))?.shift(-3).neg();
    let gs = g.compose(&s)?;
    let y = q
        .pow_rational(&Rational::from_int(-5))?
        .mul(&gs.pow_rational(&Rational::new(1, 3))?)
        .shift(-5)
        .neg();
    Ok((x, y))
}

/// The Abel map `uᵢ(t) = ∫₀ᵗ 𝒰ᵢ dx/(3y²)` with `u₄ = t`, through `t^order`.
pub fn abel_map_series(params: &CurveParams, order: i64) -> Result<AbelMapSeries> {
    let (x, y) = symbolic_branch(order + 2)?;
    abel_from_branch(params, order, x.specialize(params), y.specialize(params))
}

fn abel_from_branch(params: &CurveParams, order: i64, x: LocalSeries, y: LocalSeries) -> Result<AbelMapSeries> {
    let set = DifferentialSet::new(EtaVariant::Adjusted);
    let dx = x.derivative();
    let inv = y.pow_rational(&Rational::from_int(-2))?.scale(&Rational::new(1, 3));
    let mut u: [LocalSeries; 4] = Default::default();
    for (i, ui) in u.iter_mut().enumerate() {
        let integrand = eval_curve_poly(&set.u[i], &x, &y).mul(&inv).mul(&dx);
        *ui = integrand.integrate()?.truncate(order + 1);
        debug_assert!(ui.order() > order);
    }
    Ok(AbelMapSeries {
        params: params.clone(),
        order,
        x,
        y,
        u,
    })
}

impl AbelMapSeries {
    /// Residues `Res_{t=0} hⱼ dx/(3y²)` of the η differentials along the branch.
    pub fn eta_residues(&self, variant: EtaVariant) -> Result<[LambdaPoly; 4]> {
        let set = DifferentialSet::new(variant);
        let dx = self.x.derivative();
        let inv = self.y.pow_rational(&Rational::from_int(-2))?.scale(&Rational::new(1, 3));
        let mut out: [LambdaPoly; 4] = Default::default();
        for (j, r) in out.iter_mut().enumerate() {
            let h = set.h[j].specialize(&self.params);
            let integrand = eval_curve_poly(&h, &self.x, &self.y).mul(&inv).mul(&dx);
            *r = integrand
                .residue()
                .ok_or_else(|| Error::WindowCollapse("η integrand too short to reach t⁻¹".into()))?;
        }
        Ok(out)
    }

    /// `f(x(t), y(t))`, which must vanish wherever it is known.
    pub fn curve_residual(&self) -> LocalSeries {
        let y3 = self.y.pow(3);
        let mut quintic = self.x.pow(5);
        let mut xp = self.x.pow(0);
        for j in 0..LAMBDA_COUNT {
            let coef = self.params.specialize_lambda(&LambdaPoly::lambda(j));
            quintic = quintic.add(&xp.scale_lambda(&coef));
            xp = xp.mul(&self.x);
        }
        y3.sub(&quintic)
    }

    /// `Σⱼ uᵢ(tⱼ)` over `k` points as series in `t1..tk`.
    pub fn multi_point_sum(&self, k: usize) -> Result<[WeightedSeries; 4]> {
        let spec = VarSpec::points(k);
        let mut out: Vec<WeightedSeries> = Vec::new();
        for ui in &self.u {
            let mut acc = WeightedSeries::zero(spec.clone(), Window::Upto(self.order));
            for slot in 0..k {
                acc = acc.add(&ui.to_weighted(spec.clone(), slot)?)?;
            }
            out.push(acc);
        }
        Ok(out.try_into().expect("four components"))
    }
}

/// Convenience: the Abel sum over `k` points straight from the curve data.
pub fn multi_point_abel_sum(params: &CurveParams, k: usize, order: i64) -> Result<[WeightedSeries; 4]> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidIndex(format!("{k} points; expected 1, 2 or 3")));
    }
    abel_map_series(params, order)?.multi_point_sum(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn c(n: i64, d: i64) -> LambdaPoly {
        LambdaPoly::constant(r(n, d))
    }

    #[test]
    fn rational_powers() {
        // (1 + t)^(1/2) = 1 + t/2 − t²/8 + t³/16
        let s = LocalSeries::polynomial(&[(0, c(1, 1)), (1, c(1, 1))], 4);
        let h = s.pow_rational(&r(1, 2)).unwrap();
        assert_eq!(h.coeff(3), Some(c(1, 16)));
        assert_eq!(h.coeff(2), Some(c(-1, 8)));
        let sq = h.mul(&h);
        assert_eq!(sq, s);
        let inv = LocalSeries::polynomial(&[(-2, c(-1, 1)), (-1, c(1, 1))], 3).pow_rational(&r(-1, 1)).unwrap();
        assert_eq!(inv.start(), 2);
        assert_eq!(inv.coeff(2), Some(c(-1, 1)));
    }

    #[test]
    fn reversion_inverts() {
        let u = LocalSeries::polynomial(&[(1, c(1, 1)), (2, c(3, 1)), (4, c(-2, 5))], 12);
        let s = u.reversion().unwrap();
        let back = u.compose(&s).unwrap();
        assert_eq!(back, LocalSeries::monomial(1, LambdaPoly::one(), 12).truncate(back.order()));
        assert!(back.order() >= 11);
    }

    #[test]
    fn lambda_zero_closed_form() {
        let p = CurveParams::numeric([0, 0, 0, 0, 0].map(Rational::from_int));
        let a = abel_map_series(&p, 20).unwrap();
        let one = LambdaPoly::one();
        assert_eq!(a.x.clone().normalized().valuation(), Some(-3));
        for k in -3..a.x.order() {
            let want = if k == -3 { one.neg() } else { LambdaPoly::zero() };
            assert_eq!(a.x.coeff(k).unwrap(), want);
        }
        assert_eq!(a.y.coeff(-5), Some(one.neg()));
        let expect = [(7, r(1, 7)), (4, r(-1, 4)), (2, r(-1, 2)), (1, r(1, 1))];
        for (i, (k, v)) in expect.iter().enumerate() {
            for j in 0..=20 {
                let want = if j == *k { LambdaPoly::constant(v.clone()) } else { LambdaPoly::zero() };
                assert_eq!(a.u[i].coeff(j).unwrap(), want, "u{} t^{j}", i + 1);
            }
        }
    }

    #[test]
    fn general_branch_is_on_the_curve_and_homogeneous() {
        let a = abel_map_series(&CurveParams::symbolic(), 24).unwrap();
        let f = a.curve_residual();
        assert!(f.order() >= 8);
        assert!(f.coeffs.iter().all(LambdaPoly::is_zero), "{f}");
        assert_eq!(a.u[3].coeff(1), Some(LambdaPoly::one()));
        for j in 2..=24 {
            assert!(a.u[3].coeff(j).unwrap().is_zero());
        }
        for (i, w) in [7, 4, 2, 1].into_iter().enumerate() {
            assert_eq!(a.u[i].weights(), vec![w], "u{}", i + 1);
        }
        assert_eq!(a.x.weights(), vec![-3]);
        assert_eq!(a.y.weights(), vec![-5]);
        assert_eq!(a.u[0].coeff(7), Some(c(1, 7)));
    }

    #[test]
    fn eta_residues_vanish_for_the_adjusted_set() {
        let a = abel_map_series(&CurveParams::symbolic(), 20).unwrap();
        for r in a.eta_residues(EtaVariant::Adjusted).unwrap() {
            assert!(r.is_zero(), "{r}");
        }
    }

    #[test]
    fn two_point_sum() {
        let p = CurveParams::numeric([0, 0, 0, 0, 0].map(Rational::from_int));
        let s = multi_point_abel_sum(&p, 2, 10).unwrap();
        let spec = VarSpec::t2();
        let t1 = WeightedSeries::var(spec.clone(), 0);
        let t2 = WeightedSeries::var(spec.clone(), 1);
        assert!(s[3].sub(&t1.add(&t2).unwrap()).unwrap().is_zero());
        let sq = t1.mul(&t1).unwrap().add(&t2.mul(&t2).unwrap()).unwrap().scale(&r(-1, 2));
        assert!(s[2].sub(&sq).unwrap().is_zero());
        let swapped = s[0].embed(spec, &[1, 0]).unwrap();
        assert_eq!(swapped, s[0]);
    }

    #[test]
    fn json_round_trip() {
        let a = abel_map_series(&CurveParams::symbolic(), 10).unwrap();
        let j = LocalSeriesJson::from_series(&a.y);
        assert!(!j.principal_part.is_empty());
        assert_eq!(j.to_series().unwrap(), a.y);
    }
}
