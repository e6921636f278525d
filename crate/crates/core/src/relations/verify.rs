use std::time::Instant;

use crate::abelian::{pole_order, AbelianContext};
use crate::error::{Error, Result};
use crate::grading::monomial::LAMBDA_COUNT;
use crate::rational::Rational;
use crate::expr::{Arg, Expr};
use crate::grading::series::{WeightedSeries, Window};
use crate::relations::catalog::{weight_screen, RelationEntry, WeightScreen};
use crate::relations::{ReliableWindow, Verdict, VerificationReport};
use crate::sigma::SigmaSeries;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Smallest `hi − lo` accepted for a PASS.
    pub min_slack: i64,
    /// λ-grades retained in every intermediate series.
    pub lambda_grade: u32,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            min_slack: 6,
            lambda_grade: 5,
            timings: false,
        }
    }
}

/// A cleared residual together with the range it is trusted on.
#[derive(Clone, Debug)]
pub struct Check {
    pub cleared_power: u32,
    pub window: ReliableWindow,
    pub residual: WeightedSeries,
}

impl Check {
    pub fn verdict(&self, min_slack: i64) -> Verdict {
        if !self.residual.is_zero() {
            return Verdict::Fail;
        }
        match self.window.slack() {
            Some(s) if s < min_slack => Verdict::Indeterminate,
            _ => Verdict::Pass,
        }
    }

    /// `coefficient*monomial` of the residual term of least main weight.
    pub fn lowest_residual(&self) -> Option<String> {
        let spec = self.residual.spec().clone();
        self.residual
            .sorted_terms()
            .first()
            .map(|(m, c)| format!("{c}*{}", spec.label(*m)))
    }
}

/// Shared σ-derived data for checking many relations.
pub struct Verifier {
    ctx: AbelianContext,
    lambdas: [Option<Rational>; LAMBDA_COUNT],
    sigma_hash: Option<String>,
    symbolic: bool,
    opts: VerifyOptions,
}

impl Verifier {
    pub fn new(sigma: &SigmaSeries, opts: VerifyOptions) -> Result<Self> {
        let mut v = Self::from_series(sigma.series.clone(), opts)?;
        v.sigma_hash = Some(sigma.provenance.hash());
        v.symbolic = sigma.provenance.lambdas.iter().all(Option::is_none);
        for (slot, l) in v.lambdas.iter_mut().zip(&sigma.provenance.lambdas) {
            *slot = l
                .as_deref()
                .map(str::parse::<Rational>)
                .transpose()
                .map_err(|e| Error::Schema(format!("λ value in provenance: {}", e.0)))?;
        }
        Ok(v)
    }

    /// Over a bare σ-series, e.g. a polynomial one.
    pub fn from_series(series: WeightedSeries, opts: VerifyOptions) -> Result<Self> {
        let symbolic = series.iter().any(|(m, _)| m.has_lambda());
        Ok(Verifier {
            ctx: AbelianContext::with_lambda_grade(series, Window::Exact, opts.lambda_grade)?,
            lambdas: Default::default(),
            sigma_hash: None,
            symbolic,
            opts,
        })
    }

    pub fn context(&self) -> &AbelianContext {
        &self.ctx
    }

    pub fn options(&self) -> VerifyOptions {
        self.opts
    }

    pub fn sigma_hash(&self) -> Option<&str> {
        self.sigma_hash.as_deref()
    }

    pub fn is_symbolic(&self) -> bool {
        self.symbolic
    }

    /// Fixes λ values for relations checked against a σ with no λ in it,
    /// such as the polynomial σ at `λ = 0`.
    pub fn with_lambdas(mut self, lambdas: [Option<Rational>; LAMBDA_COUNT]) -> Self {
        self.lambdas = lambdas;
        self
    }

    /// `e` with this verifier's numeric λ values substituted.
    pub fn specialize(&self, e: &Expr) -> Expr {
        if self.lambdas.iter().all(Option::is_none) {
            return e.clone();
        }
        e.specialize(&self.lambdas)
    }

    /// Largest main weight worth computing for a residual whose lowest
    /// possible term sits at `lo`.
    pub fn cap_above(&self, lo: i64) -> Window {
        Window::Upto(lo + 3 * self.opts.lambda_grade as i64)
    }

    /// Clears `expr` (single argument `u`) to its largest pole order.
    pub fn check_expr(&self, expr: &Expr) -> Result<Check> {
        self.check_against(expr, None)
    }

    /// `σ^D·expr − σ^D·σ^{-k}·extra`, where `extra` is a numerator carrying
    /// `k` powers of σ in its denominator.
    pub fn check_against(&self, expr: &Expr, extra: Option<(&WeightedSeries, u32)>) -> Result<Check> {
        let specialized = self.specialize(expr);
        let expr = &specialized;
        let d = pole_order(expr).max(extra.map_or(0, |e| e.1));
        let ws = expr.term_weights();
        let (wmin, wmax) = match extra {
            Some((s, k)) => {
                let w: Vec<i64> = s.total_weights().into_iter().map(|w| w - 8 * k as i64).collect();
                (
                    ws.iter().chain(w.iter()).copied().min().unwrap_or(0),
                    ws.iter().chain(w.iter()).copied().max().unwrap_or(0),
                )
            }
            None => (ws.iter().copied().min().unwrap_or(0), ws.iter().copied().max().unwrap_or(0)),
        };
        let lo = 8 * d as i64 + wmin;
        let cap = self.cap_above(8 * d as i64 + wmax);
        let mut residual = self.ctx.cleared_to(expr, d, cap)?;
        if let Some((s, k)) = extra {
            let pow = self.ctx.sigma_power(d - k, cap)?;
            let t = crate::abelian::product_graded(&[s, &pow], cap, Some(-3 * self.opts.lambda_grade as i64))?;
            residual = residual.sub(&t)?;
        }
        let hi = residual.window().min(cap).value();
        let hi = hi.map(|h| h.min(lo + 3 * self.opts.lambda_grade as i64));
        Ok(Check {
            cleared_power: d,
            window: ReliableWindow { lo, hi },
            residual,
        })
    }

    fn stamp(&self, mut r: VerificationReport, started: Instant) -> VerificationReport {
        r.sigma = self.sigma_hash.clone();
        if self.opts.timings {
            r.elapsed_ms = Some(started.elapsed().as_millis() as u64);
        }
        r
    }

    /// Report for `lhs − rhs = 0`.
    pub fn report_expr(&self, suite: &str, id: &str, text: &str, expr: &Expr, expected: Option<Verdict>) -> VerificationReport {
        let started = Instant::now();
        let mut r = VerificationReport::new(suite, id, Verdict::Fail);
        r.relation = Some(text.to_string());
        r.expected = expected;
        if expr.uses_arg(Arg::V) {
            r.note = Some("depends on the second argument, so it cannot hold identically in u".into());
            return self.stamp(r, started);
        }
        match self.check_expr(expr) {
            Ok(c) => {
                r.verdict = c.verdict(self.opts.min_slack);
                r.cleared_power = Some(c.cleared_power);
                r.window = Some(c.window);
                r.residual_terms = c.residual.len();
                r.lowest_residual = c.lowest_residual();
            }
            Err(e) => {
                r.verdict = Verdict::Indeterminate;
                r.note = Some(e.to_string());
            }
        }
        self.stamp(r, started)
    }

    pub fn verify_entry(&self, suite: &str, e: &RelationEntry) -> VerificationReport {
        let mut r = self.report_expr(suite, &e.id, &e.text, &e.residual_expr(), e.expected);
        r.weight_screen = Some(e.screen.clone());
        if r.note.is_none() {
            r.note = e.note.clone();
        }
        r
    }

    /// Parses and verifies `lhs = rhs`.
    pub fn verify_text(&self, suite: &str, id: &str, text: &str, expected: Option<Verdict>) -> Result<VerificationReport> {
        let (l, rhs) = crate::expr::parse_relation(text)?;
        let mut r = self.report_expr(suite, id, text, &l.sub(&rhs), expected);
        let screen = weight_screen(&l, &rhs);
        r.weight_screen = Some(screen);
        Ok(r)
    }
}

/// Whether a screen predicts failure.
pub fn screen_predicts_fail(s: &WeightScreen) -> bool {
    !s.is_consistent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::sigma::schur_weierstrass;

    #[test]
    fn schur_checks() {
        let v = Verifier::from_series(schur_weierstrass(), VerifyOptions::default()).unwrap();
        assert!(!v.is_symbolic());
        let c = v.check_expr(&parse_expr("Q4444 + 3*P33").unwrap()).unwrap();
        assert_eq!(c.cleared_power, 2);
        assert_eq!(c.window.lo, 12);
        assert_eq!(c.verdict(6), Verdict::Pass);
        let bad = v.check_expr(&parse_expr("Q4444 + 2*P33").unwrap()).unwrap();
        assert_eq!(bad.verdict(6), Verdict::Fail);
        assert!(bad.lowest_residual().is_some());
    }

    #[test]
    fn second_argument_is_rejected() {
        let v = Verifier::from_series(schur_weierstrass(), VerifyOptions::default()).unwrap();
        let r = v.report_expr("t", "x", "P44(v)", &parse_expr("P44(v)").unwrap(), Some(Verdict::Fail));
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.note.is_some());
    }
}
