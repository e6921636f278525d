//! ℘ and Q functions over a σ-series, kept as numerators over powers of σ.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Arg, Expr, PIndex, Sym};
use crate::grading::json::SeriesJson;
use crate::grading::series::{WeightedSeries, Window};
use crate::grading::varspec::VarSpec;
use crate::grading::Monomial;
use crate::rational::Rational;

/// `num / σ^sigma_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct FracSeries {
    pub num: WeightedSeries,
    pub sigma_power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracSeriesJson {
    #[serde(flatten)]
    pub numerator: SeriesJson,
    pub sigma_power: u32,
}

impl FracSeries {
    pub fn to_json(&self) -> FracSeriesJson {
        FracSeriesJson {
            numerator: SeriesJson::from_series(&self.num),
            sigma_power: self.sigma_power,
        }
    }

    pub fn from_json(j: &FracSeriesJson) -> Result<Self> {
        Ok(FracSeries {
            num: j.numerator.to_series()?,
            sigma_power: j.sigma_power,
        })
    }

    pub fn window(&self) -> Window {
        self.num.window()
    }
}

/// Product of several series, pruning partial products by what the
/// remaining factors can still contribute.
pub fn product(factors: &[&WeightedSeries], cap: Window) -> Result<WeightedSeries> {
    product_graded(factors, cap, None)
}

/// [`product`] with terms of λ-weight below `lambda_floor` discarded.
pub fn product_graded(factors: &[&WeightedSeries], cap: Window, lambda_floor: Option<i64>) -> Result<WeightedSeries> {
    let Some(first) = factors.first() else {
        return Err(Error::SpecMismatch("empty product".into()));
    };
    let floors: Vec<Option<i64>> = factors.iter().map(|f| f.effective_min_weight()).collect();
    let mut acc = (*first).clone();
    for (i, f) in factors.iter().enumerate().skip(1) {
        let rest: i64 = floors[i + 1..].iter().map(|w| w.unwrap_or(0)).sum();
        let partial_cap = match cap {
            Window::Exact => Window::Exact,
            Window::Upto(c) => Window::Upto(c - rest),
        };
        acc = acc.mul_graded(f, partial_cap, lambda_floor)?;
    }
    if factors.len() == 1 {
        acc = acc.truncate(acc.window().min(cap));
        if let Some(lf) = lambda_floor {
            acc = acc.lambda_truncate(lf);
        }
    }
    Ok(acc)
}

/// Every way of splitting the multiset `idx` into `(S, I∖S)`, with the
/// signed multiplicity `(−1)^{|I∖S|}` of each distinct split.
fn hirota_splits(idx: &[u8]) -> BTreeMap<(Vec<u8>, Vec<u8>), i64> {
    let n = idx.len();
    let mut out: BTreeMap<(Vec<u8>, Vec<u8>), i64> = BTreeMap::new();
    for mask in 0u32..(1 << n) {
        let mut s = Vec::new();
        let mut rest = Vec::new();
        for (b, &i) in idx.iter().enumerate() {
            if mask & (1 << b) != 0 {
                s.push(i);
            } else {
                rest.push(i);
            }
        }
        let sign = if rest.len() % 2 == 0 { 1 } else { -1 };
        *out.entry((s, rest)).or_default() += sign;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Lazily computed derivatives of σ and the functions built from them.
pub struct AbelianContext {
    sigma: WeightedSeries,
    cap: Window,
    lambda_floor: Option<i64>,
    derivs: RwLock<FxHashMap<Vec<u8>, Arc<WeightedSeries>>>,
    syms: RwLock<FxHashMap<Sym, Arc<FracSeries>>>,
}

impl AbelianContext {
    /// `cap` bounds every product by weight; use `Window::Exact` for none.
    pub fn new(sigma: WeightedSeries, cap: Window) -> Result<Self> {
        if **sigma.spec() != *VarSpec::u() {
            return Err(Error::SpecMismatch("σ must be a series in u1..u4".into()));
        }
        Ok(AbelianContext {
            sigma,
            cap,
            lambda_floor: None,
            derivs: RwLock::new(FxHashMap::default()),
            syms: RwLock::new(FxHashMap::default()),
        })
    }

    /// Keeps only terms of λ-grade at most `grade` (λ-weight ≥ −3·grade)
    /// in every series the context produces.
    pub fn with_lambda_grade(sigma: WeightedSeries, cap: Window, grade: u32) -> Result<Self> {
        let floor = -3 * grade as i64;
        let mut ctx = Self::new(sigma.lambda_truncate(floor), cap)?;
        ctx.lambda_floor = Some(floor);
        Ok(ctx)
    }

    pub fn lambda_grade(&self) -> Option<u32> {
        self.lambda_floor.map(|f| (-f / 3) as u32)
    }

    fn prod(&self, factors: &[&WeightedSeries], cap: Window) -> Result<WeightedSeries> {
        product_graded(factors, cap.min(self.cap), self.lambda_floor)
    }

    pub fn sigma(&self) -> &WeightedSeries {
        &self.sigma
    }

    pub fn cap(&self) -> Window {
        self.cap
    }

    /// `∂_I σ` for a multiset of 1-based indices.
    pub fn sigma_derivative(&self, idx: &[u8]) -> Result<Arc<WeightedSeries>> {
        let mut key = idx.to_vec();
        key.sort_unstable();
        if key.is_empty() {
            return Ok(Arc::new(self.sigma.clone()));
        }
        if let Some(s) = self.derivs.read().expect("lock").get(&key) {
            return Ok(s.clone());
        }
        let last = *key.last().unwrap();
        if !(1..=4).contains(&last) || key[0] < 1 {
            return Err(Error::InvalidIndex(format!("{key:?}")));
        }
        let parent = self.sigma_derivative(&key[..key.len() - 1])?;
        let d = Arc::new(parent.derivative(last as usize - 1)?);
        self.derivs.write().expect("lock").insert(key, d.clone());
        Ok(d)
    }

    /// `σ² Q_I = −½ Σ_{S ⊆ I} (−1)^{|I∖S|} σ_S σ_{I∖S}`; zero for odd `|I|`.
    pub fn hirota(&self, idx: &[u8]) -> Result<FracSeries> {
        let spec = self.sigma.spec().clone();
        if idx.len() % 2 == 1 {
            return Ok(FracSeries {
                num: WeightedSeries::zero(spec, Window::Exact),
                sigma_power: 2,
            });
        }
        let mut acc: Option<WeightedSeries> = None;
        for ((s, rest), c) in hirota_splits(idx) {
            if s > rest {
                continue;
            }
            // the split and its mirror carry the same sign for even |I|
            let mult = if s == rest { c } else { 2 * c };
            let a = self.sigma_derivative(&s)?;
            let b = self.sigma_derivative(&rest)?;
            let term = self.prod(&[&a, &b], self.cap)?.scale(&Rational::new(-mult, 2));
            acc = Some(match acc {
                None => term,
                Some(prev) => prev.add(&term)?,
            });
        }
        Ok(FracSeries {
            num: acc.expect("at least one split"),
            sigma_power: 2,
        })
    }

    /// `∂_k (N / σ^d) = (N_k σ − d N σ_k) / σ^{d+1}`.
    pub fn differentiate(&self, f: &FracSeries, k: u8) -> Result<FracSeries> {
        let slot = k as usize - 1;
        let nk = f.num.derivative(slot)?;
        let sk = self.sigma_derivative(&[k])?;
        let a = self.prod(&[&nk, &self.sigma], self.cap)?;
        let b = self.prod(&[&f.num, &sk], self.cap)?.scale(&Rational::from_int(f.sigma_power as i64));
        Ok(FracSeries {
            num: a.sub(&b)?,
            sigma_power: f.sigma_power + 1,
        })
    }

    /// The function named by a symbol, evaluated at `u`.
    pub fn symbol(&self, sym: &Sym) -> Result<Arc<FracSeries>> {
        if sym.arg() != Arg::U {
            return Err(Error::SpecMismatch(format!("{sym} is not a function of u alone")));
        }
        if let Some(f) = self.syms.read().expect("lock").get(sym) {
            return Ok(f.clone());
        }
        let f = match sym {
            Sym::P { idx, .. } => {
                let ix = idx.indices();
                match ix.len() {
                    0 | 1 => return Err(Error::InvalidIndex(format!("℘ needs two indices, got {idx}"))),
                    2 => self.hirota(ix)?,
                    n => {
                        let parent = Sym::P {
                            idx: PIndex::new(ix[..n - 1].to_vec())?,
                            arg: Arg::U,
                        };
                        let p = self.symbol(&parent)?;
                        self.differentiate(&p, ix[n - 1])?
                    }
                }
            }
            Sym::Q { idx, deriv, .. } => {
                if idx.len() != 4 && idx.len() != 6 {
                    return Err(Error::InvalidIndex(format!("Q takes four or six indices, got {idx}")));
                }
                let dv = deriv.indices();
                if dv.is_empty() {
                    self.hirota(idx.indices())?
                } else {
                    let parent = Sym::Q {
                        idx: idx.clone(),
                        deriv: PIndex::new(dv[..dv.len() - 1].to_vec())?,
                        arg: Arg::U,
                    };
                    let q = self.symbol(&parent)?;
                    self.differentiate(&q, dv[dv.len() - 1])?
                }
            }
        };
        let f = Arc::new(f);
        self.syms.write().expect("lock").insert(sym.clone(), f.clone());
        Ok(f)
    }

    pub fn pfunction(&self, idx: &str) -> Result<Arc<FracSeries>> {
        self.symbol(&Sym::P {
            idx: PIndex::parse(idx)?,
            arg: Arg::U,
        })
    }

    pub fn qfunction(&self, idx: &str) -> Result<Arc<FracSeries>> {
        self.symbol(&Sym::Q {
            idx: PIndex::parse(idx)?,
            deriv: PIndex::new(Vec::new())?,
            arg: Arg::U,
        })
    }

    /// `σᵏ` within `cap`.
    pub fn sigma_power(&self, k: u32, cap: Window) -> Result<WeightedSeries> {
        let one = WeightedSeries::one(self.sigma.spec().clone());
        let mut factors: Vec<&WeightedSeries> = vec![&one];
        for _ in 0..k {
            factors.push(&self.sigma);
        }
        self.prod(&factors, cap)
    }

    /// Clears denominators of an expression in single-argument symbols:
    /// returns `(σ^D · expr, D)` with `D` the largest pole order of any term.
    pub fn cleared(&self, e: &Expr) -> Result<(WeightedSeries, u32)> {
        let d = pole_order(e);
        Ok((self.cleared_to(e, d, self.cap)?, d))
    }

    /// `σ^d · expr`, truncated at `cap`; `d` must reach every term's pole order.
    pub fn cleared_to(&self, e: &Expr, d: u32, cap: Window) -> Result<WeightedSeries> {
        let spec = self.sigma.spec().clone();
        let mut acc = WeightedSeries::zero(spec.clone(), Window::Exact);
        let mut powers: FxHashMap<u32, WeightedSeries> = FxHashMap::default();
        for (syms, coeff) in e.terms() {
            let fs: Vec<Arc<FracSeries>> = syms.iter().map(|s| self.symbol(s)).collect::<Result<_>>()?;
            let p: u32 = fs.iter().map(|f| f.sigma_power).sum();
            let extra = d.checked_sub(p).ok_or_else(|| {
                Error::Config(format!("σ-power {d} does not clear a term of pole order {p} in `{e}`"))
            })?;
            if let std::collections::hash_map::Entry::Vacant(v) = powers.entry(extra) {
                v.insert(self.sigma_power(extra, cap)?);
            }
            let mut factors: Vec<&WeightedSeries> = fs.iter().map(|f| &f.num).collect();
            factors.push(&powers[&extra]);
            let term = self.prod(&factors, cap)?.scale_lambda(coeff);
            acc = acc.add(&term)?;
        }
        let w = acc.window().min(cap).min(self.cap);
        Ok(acc.truncate(w))
    }

    /// `σ²·(℘_ijkl − 2(℘ij℘kl + ℘ik℘jl + ℘il℘jk))` from the ℘'s, i.e. over σ⁴,
    /// compared against σ² times the bilinear numerator. Returns the
    /// difference, which must vanish in its window.
    pub fn q_reduction_residual(&self, idx: &str) -> Result<WeightedSeries> {
        let ix = PIndex::parse(idx)?;
        if ix.len() != 4 {
            return Err(Error::InvalidIndex(format!("{idx}: four indices expected")));
        }
        let i = ix.indices();
        let pair = |a: u8, b: u8| PIndex::new(vec![a, b]).map(|idx| Sym::P { idx, arg: Arg::U });
        let mut e = Expr::sym(Sym::P { idx: ix.clone(), arg: Arg::U });
        for (a, b, c, dd) in [(i[0], i[1], i[2], i[3]), (i[0], i[2], i[1], i[3]), (i[0], i[3], i[1], i[2])] {
            let t = Expr::sym(pair(a, b)?).mul(&Expr::sym(pair(c, dd)?));
            e = e.sub(&t.scale(&crate::grading::LambdaPoly::constant(Rational::from_int(2))));
        }
        let (via_p, d) = self.cleared(&e)?;
        debug_assert_eq!(d, 4);
        let q = self.qfunction(idx)?;
        let s2 = self.sigma_power(2, self.cap)?;
        let via_h = self.prod(&[&q.num, &s2], self.cap)?;
        via_p.sub(&via_h)
    }

    /// `A/σ^a − B/σ^b` over the common power.
    pub fn difference(&self, a: &FracSeries, b: &FracSeries) -> Result<FracSeries> {
        let d = a.sigma_power.max(b.sigma_power);
        let sa = self.sigma_power(d - a.sigma_power, self.cap)?;
        let sb = self.sigma_power(d - b.sigma_power, self.cap)?;
        let na = self.prod(&[&a.num, &sa], self.cap)?;
        let nb = self.prod(&[&b.num, &sb], self.cap)?;
        Ok(FracSeries {
            num: na.sub(&nb)?,
            sigma_power: d,
        })
    }
}

/// Largest total pole order over the terms of `e`.
pub fn pole_order(e: &Expr) -> u32 {
    e.terms()
        .map(|(syms, _)| syms.iter().map(Sym::pole_order).sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// σ(u + v) or σ(u − v) as a series in `u1..u4, v1..v4`.
pub fn two_point_extend(sigma: &WeightedSeries, minus: bool) -> Result<WeightedSeries> {
    let uv = VarSpec::uv();
    let sign = if minus { -1 } else { 1 };
    let images: Vec<WeightedSeries> = (0..4)
        .map(|i| {
            let u = WeightedSeries::var(uv.clone(), i);
            let v = WeightedSeries::var(uv.clone(), i + 4).scale(&Rational::from_int(sign));
            u.add(&v)
        })
        .collect::<Result<_>>()?;
    sigma.substitute(&images, sigma.window())
}

/// Phase `k·(a + b + 2c + d) mod 3` of `u₁ᵃu₂ᵇu₃ᶜu₄ᵈ` under
/// `u ↦ (ζᵏu₁, ζᵏu₂, ζ²ᵏu₃, ζᵏu₄)`.
pub fn zeta_phase(m: Monomial, k: u32) -> u32 {
    (k * (m.exp(0) + m.exp(1) + 2 * m.exp(2) + m.exp(3))) % 3
}

/// Splits a u-series by the phase each monomial acquires.
pub fn zeta_action_u(k: u32, s: &WeightedSeries) -> [WeightedSeries; 3] {
    let mut parts: [Vec<(Monomial, Rational)>; 3] = Default::default();
    for (m, c) in s.iter() {
        parts[zeta_phase(*m, k) as usize].push((*m, c.clone()));
    }
    parts.map(|t| WeightedSeries::from_terms(s.spec().clone(), t, s.window()))
}

/// The single phase of a series under the action, if uniform.
pub fn uniform_zeta_phase(k: u32, s: &WeightedSeries) -> Option<u32> {
    let mut seen: Option<u32> = None;
    for (m, _) in s.iter() {
        let p = zeta_phase(*m, k);
        match seen {
            None => seen = Some(p),
            Some(q) if q != p => return None,
            _ => {}
        }
    }
    Some(seen.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::sigma::schur_weierstrass;

    fn ctx() -> AbelianContext {
        AbelianContext::new(schur_weierstrass(), Window::Exact).unwrap()
    }

    #[test]
    fn splits_have_the_leibniz_signs() {
        let s = hirota_splits(&[4, 4, 4, 4]);
        assert_eq!(s[&(vec![], vec![4, 4, 4, 4])], 1);
        assert_eq!(s[&(vec![4], vec![4, 4, 4])], -4);
        assert_eq!(s[&(vec![4, 4], vec![4, 4])], 6);
    }

    #[test]
    fn q4444_matches_the_explicit_bilinear_form() {
        let c = ctx();
        let q = c.qfunction("4444").unwrap();
        let s = c.sigma().clone();
        let d = |i: &[u8]| (*c.sigma_derivative(i).unwrap()).clone();
        let expect = s
            .mul(&d(&[4, 4, 4, 4]))
            .unwrap()
            .sub(&d(&[4]).mul(&d(&[4, 4, 4])).unwrap().scale(&Rational::from_int(4)))
            .unwrap()
            .add(&d(&[4, 4]).pow(2).unwrap().scale(&Rational::from_int(3)))
            .unwrap()
            .neg();
        assert_eq!(q.num, expect);
    }

    #[test]
    fn odd_hirota_vanishes() {
        assert!(ctx().hirota(&[1, 3, 4]).unwrap().num.is_zero());
    }

    #[test]
    fn q_reduces_to_a_double_pole() {
        let c = ctx();
        for idx in ["4444", "1344", "2233", "1234"] {
            assert!(c.q_reduction_residual(idx).unwrap().is_zero(), "{idx}");
        }
    }

    #[test]
    fn p_weights_and_cross_derivatives() {
        let c = ctx();
        let p44 = c.pfunction("44").unwrap();
        assert_eq!(p44.num.total_weights(), vec![14]);
        let a = c.differentiate(&c.pfunction("1234").unwrap(), 4).unwrap();
        let b = c.differentiate(&c.pfunction("1244").unwrap(), 3).unwrap();
        assert!(c.difference(&a, &b).unwrap().num.is_zero());
    }

    #[test]
    fn leading_relations_hold_for_the_schur_term() {
        // with λ = 0 and σ = S the simplest relations are exact
        let c = ctx();
        for rel in ["Q4444 + 3*P33", "Q3444 - 3*P24"] {
            let (n, _) = c.cleared(&parse_expr(rel).unwrap()).unwrap();
            assert!(n.is_zero(), "{rel}");
        }
    }

    #[test]
    fn two_point_slices() {
        let s = schur_weierstrass();
        let plus = two_point_extend(&s, false).unwrap();
        let v0: Vec<WeightedSeries> = (0..8)
            .map(|i| {
                if i < 4 {
                    WeightedSeries::var(VarSpec::u(), i)
                } else {
                    WeightedSeries::zero(VarSpec::u(), Window::Exact)
                }
            })
            .collect();
        assert_eq!(plus.substitute(&v0, Window::Exact).unwrap(), s);
        let minus = two_point_extend(&s, true).unwrap();
        let swap = minus.embed(VarSpec::uv(), &[4, 5, 6, 7, 0, 1, 2, 3]).unwrap();
        assert_eq!(swap, minus);
    }

    #[test]
    fn schur_phase_is_uniform() {
        let s = schur_weierstrass();
        for k in 0..3 {
            assert_eq!(uniform_zeta_phase(k, &s), Some((2 * k) % 3));
        }
        let u3 = WeightedSeries::var(VarSpec::u(), 2).pow(2).unwrap();
        assert_eq!(uniform_zeta_phase(1, &u3), Some(1));
    }
}
