//! Canonical JSON for series.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::monomial::{Monomial, LAMBDA_COUNT};
use crate::grading::series::{WeightedSeries, Window};
use crate::grading::varspec::VarSpec;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub lambda_exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// `reliable_weight` is `null` for exact polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub weights: Vec<i64>,
    pub terms: Vec<TermJson>,
    pub reliable_weight: Option<i64>,
}

impl SeriesJson {
    pub fn from_series(s: &WeightedSeries) -> SeriesJson {
        let arity = s.spec().arity();
        SeriesJson {
            vars: s.spec().names().to_vec(),
            weights: s.spec().weights().to_vec(),
            terms: s
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    exp: m.main_exps(arity),
                    lambda_exp: m.lambda_exps().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
            reliable_weight: s.window().value(),
        }
    }

    /// Validates and rebuilds the series. Rejects non-canonical rationals,
    /// duplicate or zero terms, and terms above the declared window.
    pub fn to_series(&self) -> Result<WeightedSeries> {
        let spec = Arc::new(VarSpec::new(self.vars.clone(), self.weights.clone())?);
        let spec = canonical_spec(spec);
        let window = match self.reliable_weight {
            None => Window::Exact,
            Some(w) => Window::Upto(w),
        };
        let mut seen = std::collections::HashSet::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exp.len() != spec.arity() {
                return Err(Error::Schema(format!(
                    "term exponent arity {} does not match {} variables",
                    t.exp.len(),
                    spec.arity()
                )));
            }
            if t.lambda_exp.len() != LAMBDA_COUNT {
                return Err(Error::Schema("lambda_exp must have five entries".into()));
            }
            if t.exp.iter().chain(&t.lambda_exp).any(|&e| e > 255) {
                return Err(Error::Schema("exponent out of range".into()));
            }
            let num: num_bigint::BigInt = t
                .num
                .parse()
                .map_err(|_| Error::Schema(format!("bad numerator `{}`", t.num)))?;
            let den: num_bigint::BigInt = t
                .den
                .parse()
                .map_err(|_| Error::Schema(format!("bad denominator `{}`", t.den)))?;
            let c = Rational::from_bigints(num.clone(), den.clone());
            if c.numer() != num || c.denom() != den {
                return Err(Error::Schema(format!(
                    "coefficient {}/{} is not in lowest terms with positive denominator",
                    t.num, t.den
                )));
            }
            if c.is_zero() {
                return Err(Error::Schema("zero coefficient stored".into()));
            }
            let m = Monomial::from_parts(&t.exp, &t.lambda_exp);
            if !seen.insert(m) {
                return Err(Error::Schema("duplicate term".into()));
            }
            let w = spec.main_weight(m);
            if !window.admits(w) {
                return Err(Error::Schema(format!(
                    "term of weight {w} lies above reliable_weight {}",
                    window
                )));
            }
            terms.push((m, c));
        }
        Ok(WeightedSeries::from_terms(spec, terms, window))
    }
}

/// Shares the process-wide variable sets when the names and weights match.
pub fn canonical_spec(spec: Arc<VarSpec>) -> Arc<VarSpec> {
    for known in [
        VarSpec::u(),
        VarSpec::uv(),
        VarSpec::curve(),
        VarSpec::t1(),
        VarSpec::t2(),
        VarSpec::t3(),
    ] {
        if *known == *spec {
            return known;
        }
    }
    spec
}

pub fn series_to_json(s: &WeightedSeries) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SeriesJson::from_series(s))?)
}

pub fn series_from_json(text: &str) -> Result<WeightedSeries> {
    let parsed: SeriesJson = serde_json::from_str(text)?;
    parsed.to_series()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper_detection() {
        let spec = VarSpec::u();
        let s = WeightedSeries::from_terms(
            spec,
            [
                (Monomial::from_parts(&[0, 0, 0, 8], &[]), Rational::new(1, 448)),
                (Monomial::from_parts(&[1, 0, 0, 4], &[0, 0, 0, 0, 1]), Rational::new(-3, 7)),
            ],
            Window::Upto(11),
        );
        let text = series_to_json(&s).unwrap();
        let back = series_from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(series_to_json(&back).unwrap(), text);

        let mut doc: SeriesJson = serde_json::from_str(&text).unwrap();
        doc.reliable_weight = Some(9);
        assert!(doc.to_series().is_err());

        let mut doc: SeriesJson = serde_json::from_str(&text).unwrap();
        doc.terms[0].num = "2".into();
        doc.terms[0].den = "896".into();
        assert!(doc.to_series().is_err());
    }
}
