//! Grade-by-grade construction of the σ-series by undetermined coefficients.

use std::time::Instant;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abelian::AbelianContext;
use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr};
use crate::grading::json::SeriesJson;
use crate::grading::monomial::{lambda_monomials_of_weight, Monomial};
use crate::grading::series::{WeightedSeries, Window};
use crate::grading::solve::{solve_shared, SolveStatus};
use crate::grading::varspec::{VarSpec, U_WEIGHTS};
use crate::puiseux::abel_map_series;
use crate::rational::Rational;

pub const FORMAT: &str = "trigonal-sigma/1";

const SCHUR: [([u32; 4], i64, i64); 6] = [
    ([0, 0, 0, 8], 1, 448),
    ([0, 2, 0, 0], 1, 1),
    ([0, 1, 1, 2], 1, 1),
    ([0, 0, 2, 4], -1, 8),
    ([0, 0, 4, 0], -1, 4),
    ([1, 0, 0, 1], -1, 1),
];

/// `S(u) = u₄⁸/448 + u₂² + u₂u₃u₄² − u₃²u₄⁴/8 − u₃⁴/4 − u₁u₄`.
pub fn schur_weierstrass() -> WeightedSeries {
    WeightedSeries::from_terms(
        VarSpec::u(),
        SCHUR
            .iter()
            .map(|(e, n, d)| (Monomial::from_parts(e, &[]), Rational::new(*n, *d))),
        Window::Exact,
    )
}

/// All `u₁ᵃu₂ᵇu₃ᶜu₄ᵈ` of the given weight, sorted.
pub fn u_monomials_of_weight(w: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if w < 0 {
        return out;
    }
    for a in 0..=w / 7 {
        for b in 0..=(w - 7 * a) / 4 {
            for c in 0..=(w - 7 * a - 4 * b) / 2 {
                let d = w - 7 * a - 4 * b - 2 * c;
                out.push(Monomial::from_parts(&[a as u32, b as u32, c as u32, d as u32], &[]));
            }
        }
    }
    out.sort();
    out
}

/// u-monomials admissible in `C_{8+3m}`: weight `8 + 3m`, even degree.
pub fn candidate_u_monomials(grade: u32) -> Vec<Monomial> {
    u_monomials_of_weight(8 + 3 * grade as i64)
        .into_iter()
        .filter(|m| m.main_degree() % 2 == 0)
        .collect()
}

/// `(u-monomial, λ-monomial)` pairs spanning `C_{8+3m}`.
pub fn candidate_basis(grade: u32) -> Vec<(Monomial, Monomial)> {
    let lambdas = lambda_monomials_of_weight(-3 * grade as i64);
    let mut out = Vec::new();
    for u in candidate_u_monomials(grade) {
        for l in &lambdas {
            out.push((u, *l));
        }
    }
    out
}

pub fn monomial_label(m: Monomial) -> String {
    VarSpec::u().label(m)
}

/// One family of equations imposed at every grade.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    /// σ vanishes on the Abel image of `points` points at infinity-based divisors.
    Strata { points: usize },
    /// A relation `expr = 0` in ℘/Q symbols, imposed with denominators cleared.
    Relation { name: String, expr: String },
}

impl Constraint {
    pub fn hirota_4444() -> Self {
        Constraint::Relation {
            name: "hirota4444".into(),
            expr: "Q4444 + 3*P33".into(),
        }
    }

    pub fn hirota_1344() -> Self {
        Constraint::Relation {
            name: "hirota1344".into(),
            expr: "Q1344 + P12 - 2*l4*P14".into(),
        }
    }

    pub fn quadratic_444() -> Self {
        Constraint::Relation {
            name: "quad444".into(),
            expr: "P444^2 - 4*P44^3 + 4*P44*P33 - P34^2 + 4*P23 - 2*l4*P34 - l4^2 + 4*l3".into(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Constraint::Strata { points } => format!("strata{points}"),
            Constraint::Relation { name, .. } => name.clone(),
        }
    }

    /// `strata1..3`, `hirota4444`, `hirota1344`, `quad444`, or `name:expr`.
    pub fn parse(label: &str) -> Result<Self> {
        let label = label.trim();
        if let Some(k) = label.strip_prefix("strata") {
            let points: usize = k.parse().map_err(|_| Error::Config(format!("bad strata label `{label}`")))?;
            if !(1..=3).contains(&points) {
                return Err(Error::Config(format!("strata take 1, 2 or 3 points, got {points}")));
            }
            return Ok(Constraint::Strata { points });
        }
        match label {
            "hirota4444" => Ok(Self::hirota_4444()),
            "hirota1344" => Ok(Self::hirota_1344()),
            "quad444" => Ok(Self::quadratic_444()),
            _ => match label.split_once(':') {
                Some((name, expr)) => {
                    parse_expr(expr)?;
                    Ok(Constraint::Relation {
                        name: name.trim().into(),
                        expr: expr.trim().into(),
                    })
                }
                None => Err(Error::Config(format!("unknown constraint `{label}`"))),
            },
        }
    }

    pub fn default_set() -> Vec<Constraint> {
        vec![
            Constraint::Strata { points: 3 },
            Self::hirota_4444(),
            Self::hirota_1344(),
            Self::quadratic_444(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub params: CurveParams,
    pub max_grade: u32,
    pub strata_order: i64,
    pub constraints: Vec<Constraint>,
    pub timings: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            params: CurveParams::symbolic(),
            max_grade: 5,
            strata_order: 40,
            constraints: Constraint::default_set(),
            timings: false,
        }
    }
}

impl BuildConfig {
    pub fn provenance(&self) -> Provenance {
        Provenance {
            format: FORMAT.into(),
            lambdas: self.params.lambdas.iter().map(|l| l.as_ref().map(|r| r.to_string())).collect(),
            max_grade: self.max_grade,
            strata_order: self.strata_order,
            constraints: self.constraints.clone(),
            branch: "u4=t".into(),
        }
    }
}

/// Everything that determines a built σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub format: String,
    /// `null` entries are symbolic.
    pub lambdas: Vec<Option<String>>,
    pub max_grade: u32,
    pub strata_order: i64,
    pub constraints: Vec<Constraint>,
    pub branch: String,
}

impl Provenance {
    /// Hex sha256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("provenance serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCount {
    pub constraint: String,
    pub rows: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeDiagnostics {
    pub grade: u32,
    pub weight: i64,
    /// Candidate u-monomials; each pairs with every λ-monomial.
    pub u_candidates: usize,
    pub lambda_monomials: usize,
    pub rows: Vec<RowCount>,
    pub rank: usize,
    /// Unconstrained directions per λ-monomial.
    pub nullity: usize,
    /// Coefficients left at zero because nothing fixed them.
    pub not_fixed: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSeries {
    pub series: WeightedSeries,
    pub max_grade: u32,
    pub provenance: Provenance,
    pub diagnostics: Vec<GradeDiagnostics>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub provenance: Provenance,
    pub provenance_hash: String,
    pub diagnostics: Vec<GradeDiagnostics>,
    pub series: SeriesJson,
    /// sha256 of the serialized `series` block.
    pub content_hash: String,
}

fn content_hash(series: &SeriesJson) -> String {
    let text = serde_json::to_string(series).expect("series serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl SigmaSeries {
    /// Window of a σ built through grade `n`: the next admissible weight
    /// is `8 + 3(n + 1)`.
    pub fn window_for_grade(n: u32) -> Window {
        Window::Upto(10 + 3 * n as i64)
    }

    pub fn is_fully_determined(&self) -> bool {
        self.diagnostics.iter().all(|d| d.not_fixed.is_empty())
    }

    /// Coefficient block `C_{8+3m}`.
    pub fn grade_part(&self, m: u32) -> WeightedSeries {
        self.series.part_of_weight(8 + 3 * m as i64)
    }

    pub fn to_json(&self) -> SigmaJson {
        let series = SeriesJson::from_series(&self.series);
        SigmaJson {
            provenance_hash: self.provenance.hash(),
            provenance: self.provenance.clone(),
            diagnostics: self.diagnostics.clone(),
            content_hash: content_hash(&series),
            series,
        }
    }

    pub fn to_json_string(&self, timings: bool) -> Result<String> {
        let mut j = self.to_json();
        if !timings {
            for d in &mut j.diagnostics {
                d.elapsed_ms = None;
            }
        }
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(j: &SigmaJson) -> Result<Self> {
        if j.provenance.format != FORMAT {
            return Err(Error::Schema(format!("unknown format `{}`", j.provenance.format)));
        }
        if content_hash(&j.series) != j.content_hash {
            return Err(Error::Schema("content hash does not match the series".into()));
        }
        if j.provenance.hash() != j.provenance_hash {
            return Err(Error::Provenance("provenance hash does not match its block".into()));
        }
        let series = j.series.to_series()?;
        if **series.spec() != *VarSpec::u() {
            return Err(Error::Schema("σ must be a series in u1..u4".into()));
        }
        Ok(SigmaSeries {
            series,
            max_grade: j.provenance.max_grade,
            provenance: j.provenance.clone(),
            diagnostics: j.diagnostics.clone(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: SigmaJson = serde_json::from_str(text)?;
        Self::from_json(&j)
    }
}

/// Equations of one grade: rows over the u-candidates, one right-hand
/// side per λ-monomial.
struct GradeSystem {
    rows: Vec<Vec<(usize, Rational)>>,
    rhs: Vec<Vec<Rational>>,
    tags: Vec<String>,
    counts: Vec<RowCount>,
}

impl GradeSystem {
    /// Adds one row per main monomial found in the columns or the known part:
    /// `Σ_α col_α[μ] c_{α,β} = −known[μ λ^β]`.
    fn push_block(
        &mut self,
        label: &str,
        columns: &[WeightedSeries],
        known: &WeightedSeries,
        lambdas: &[Monomial],
        keep: impl Fn(Monomial) -> bool,
    ) {
        let mut by_row: FxHashMap<Monomial, (Vec<(usize, Rational)>, Vec<Rational>)> = FxHashMap::default();
        let nl = lambdas.len();
        for (j, col) in columns.iter().enumerate() {
            for (m, c) in col.iter() {
                debug_assert!(!m.has_lambda());
                if !keep(*m) {
                    continue;
                }
                let e = by_row.entry(*m).or_insert_with(|| (Vec::new(), vec![Rational::zero(); nl]));
                e.0.push((j, c.clone()));
            }
        }
        let lpos: FxHashMap<Monomial, usize> = lambdas.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        for (m, c) in known.iter() {
            let main = m.main_part();
            if !keep(main) {
                continue;
            }
            let Some(&k) = lpos.get(&m.lambda_part()) else {
                continue;
            };
            let e = by_row.entry(main).or_insert_with(|| (Vec::new(), vec![Rational::zero(); nl]));
            e.1[k] = -c;
        }
        let mut keys: Vec<Monomial> = by_row.keys().copied().collect();
        keys.sort();
        let n = keys.len();
        for k in keys {
            let (row, rhs) = by_row.remove(&k).unwrap();
            self.rows.push(row);
            self.rhs.push(rhs);
            self.tags.push(format!("{label} at {k:?}"));
        }
        self.counts.push(RowCount {
            constraint: label.into(),
            rows: n,
        });
    }
}

fn monomial_series(spec: std::sync::Arc<VarSpec>, m: Monomial) -> WeightedSeries {
    WeightedSeries::from_terms(spec, [(m, Rational::one())], Window::Exact)
}

/// Total weight of a relation and its largest pole order; the relation
/// must be weight-homogeneous.
pub fn relation_weight(e: &Expr) -> Result<(i64, u32)> {
    let mut ws = e.term_weights();
    ws.sort_unstable();
    ws.dedup();
    if ws.len() > 1 {
        return Err(Error::Config(format!("relation `{e}` mixes weights {ws:?}")));
    }
    let d = e
        .terms()
        .map(|(s, _)| s.iter().map(|x| x.pole_order()).sum::<u32>())
        .max()
        .unwrap_or(0);
    Ok((ws.first().copied().unwrap_or(0), d))
}

struct StrataData {
    points: usize,
    full: [WeightedSeries; 4],
    leading: [WeightedSeries; 4],
}

/// Builds σ through `cfg.max_grade`.
pub fn build_sigma(cfg: &BuildConfig) -> Result<SigmaSeries> {
    if cfg.constraints.is_empty() {
        return Err(Error::Config("no constraints selected".into()));
    }
    let needs_strata = cfg.constraints.iter().any(|c| matches!(c, Constraint::Strata { .. }));
    let top = 8 + 3 * cfg.max_grade as i64;
    if needs_strata && cfg.strata_order < top {
        return Err(Error::Config(format!(
            "strata order {} is below the top weight {top}",
            cfg.strata_order
        )));
    }
    let abel = if needs_strata {
        Some(abel_map_series(&CurveParams::symbolic(), cfg.strata_order)?)
    } else {
        None
    };
    let mut strata = Vec::new();
    let mut relations: Vec<(String, Expr)> = Vec::new();
    for c in &cfg.constraints {
        match c {
            Constraint::Strata { points } => {
                let full = abel.as_ref().expect("computed above").multi_point_sum(*points)?;
                let leading = full.clone().map(|s| s.filter(|m| !m.has_lambda()));
                strata.push(StrataData {
                    points: *points,
                    full,
                    leading,
                });
            }
            Constraint::Relation { name, expr } => {
                let e = parse_expr(expr)?;
                relation_weight(&e)?;
                relations.push((name.clone(), e));
            }
        }
    }

    let u = VarSpec::u();
    let s = schur_weierstrass();
    let mut sigma = s.clone();
    let mut diagnostics = Vec::new();
    for m in 1..=cfg.max_grade {
        let started = Instant::now();
        let weight = 8 + 3 * m as i64;
        let cands = candidate_u_monomials(m);
        let lambdas = lambda_monomials_of_weight(-3 * m as i64);
        let mut sys = GradeSystem {
            rows: Vec::new(),
            rhs: Vec::new(),
            tags: Vec::new(),
            counts: Vec::new(),
        };
        for st in &strata {
            let cap = Window::Upto(weight);
            let known = sigma.substitute(&st.full, cap)?.part_of_weight(weight);
            let columns: Vec<WeightedSeries> = cands
                .iter()
                .map(|a| Ok(monomial_series(u.clone(), *a).substitute(&st.leading, cap)?.part_of_weight(weight)))
                .collect::<Result<_>>()?;
            let sorted = |t: Monomial| (1..st.points).all(|i| t.exp(i - 1) >= t.exp(i));
            sys.push_block(&format!("strata{}", st.points), &columns, &known, &lambdas, sorted);
        }
        for (name, e) in &relations {
            let (w, d) = relation_weight(e)?;
            let target = 8 * d as i64 + w + 3 * m as i64;
            let cap = Window::Upto(target);
            let known = AbelianContext::new(sigma.clone(), cap)?.cleared(e)?.0.part_of_weight(target);
            let base = AbelianContext::new(s.clone(), cap)?.cleared(e)?.0.part_of_weight(target);
            let columns: Vec<WeightedSeries> = cands
                .iter()
                .map(|a| {
                    let shifted = s.add(&monomial_series(u.clone(), *a))?;
                    let f = AbelianContext::new(shifted, cap)?.cleared(e)?.0.part_of_weight(target);
                    Ok(f.sub(&base)?.filter(|m| !m.has_lambda()))
                })
                .collect::<Result<_>>()?;
            sys.push_block(name, &columns, &known, &lambdas, |_| true);
        }

        let sols = solve_shared(&sys.rows, cands.len(), &sys.rhs);
        let mut rank = cands.len();
        let mut free_cols: Vec<usize> = Vec::new();
        let mut terms: Vec<(Monomial, Rational)> = Vec::new();
        for (k, sol) in sols.iter().enumerate() {
            match &sol.status {
                SolveStatus::Inconsistent { witness } => {
                    return Err(Error::Inconsistent {
                        grade: m,
                        witness: format!("{} (λ-monomial {})", sys.tags[*witness], monomial_label(lambdas[k])),
                    });
                }
                SolveStatus::Underdetermined { free } => free_cols = free.clone(),
                SolveStatus::Unique => {}
            }
            rank = sol.rank;
            for (j, v) in sol.values.iter().enumerate() {
                if !v.is_zero() {
                    terms.push((cands[j].mul(lambdas[k]), v.clone()));
                }
            }
        }
        if sols.is_empty() {
            rank = 0;
        }
        let not_fixed: Vec<String> = free_cols
            .iter()
            .flat_map(|&j| {
                let c = cands[j];
                lambdas.iter().map(move |l| monomial_label(c.mul(*l)))
            })
            .collect();
        if !not_fixed.is_empty() {
            log::warn!("grade {m}: {} coefficient(s) NOT-FIXED", not_fixed.len());
        }
        let block = WeightedSeries::from_terms(u.clone(), terms, Window::Exact);
        sigma = sigma.add(&block)?;
        let elapsed = started.elapsed().as_millis() as u64;
        log::info!("grade {m}: {} unknowns, rank {rank}, {elapsed} ms", cands.len() * lambdas.len());
        diagnostics.push(GradeDiagnostics {
            grade: m,
            weight,
            u_candidates: cands.len(),
            lambda_monomials: lambdas.len(),
            rows: sys.counts,
            rank,
            nullity: cands.len() - rank,
            not_fixed,
            elapsed_ms: cfg.timings.then_some(elapsed),
        });
    }
    let series = cfg
        .params
        .specialize(&sigma)
        .with_window(SigmaSeries::window_for_grade(cfg.max_grade));
    Ok(SigmaSeries {
        series,
        max_grade: cfg.max_grade,
        provenance: cfg.provenance(),
        diagnostics,
    })
}

/// Weight of a u-monomial; handy for callers assembling their own checks.
pub fn u_weight(m: Monomial) -> i64 {
    (0..4).map(|i| U_WEIGHTS[i] * m.exp(i) as i64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schur_coefficients() {
        let s = schur_weierstrass();
        assert_eq!(s.coeff(Monomial::from_parts(&[0, 0, 0, 8], &[])), Rational::new(1, 448));
        assert_eq!(s.coeff(Monomial::from_parts(&[1, 0, 0, 1], &[])), Rational::from_int(-1));
        assert_eq!(s.total_weights(), vec![8]);
    }

    #[test]
    fn candidate_counts() {
        let counts: Vec<usize> = (0..=5).map(|m| candidate_u_monomials(m).len()).collect();
        assert_eq!(counts, vec![6, 8, 14, 19, 29, 38]);
        assert!(candidate_basis(1).iter().all(|(_, l)| *l == Monomial::lambda(4)));
        assert!(candidate_basis(5).iter().any(|(_, l)| *l == Monomial::lambda(0)));
        let odd = Monomial::from_parts(&[0, 0, 0, 11], &[]);
        assert!(!candidate_u_monomials(1).contains(&odd));
    }

    #[test]
    fn constraint_labels_round_trip() {
        for c in Constraint::default_set() {
            assert_eq!(Constraint::parse(&c.label()).unwrap(), c);
        }
        assert!(Constraint::parse("strata4").is_err());
        assert!(Constraint::parse("custom: Q3444 - 3*P24").is_ok());
    }

    #[test]
    fn grade_two_build_is_determined() {
        let cfg = BuildConfig {
            max_grade: 2,
            strata_order: 16,
            ..BuildConfig::default()
        };
        let s = build_sigma(&cfg).unwrap();
        assert!(s.is_fully_determined(), "{:?}", s.diagnostics);
        let lambda_free = s.series.filter(|m| !m.has_lambda()).with_window(Window::Exact);
        assert_eq!(lambda_free, schur_weierstrass());
        assert!(s.series.iter().all(|(m, _)| m.main_degree() % 2 == 0));
        assert_eq!(s.series.total_weights(), vec![8]);
    }
}
