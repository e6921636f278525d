use std::sync::Arc;
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::abelian::{pole_order, product_graded, two_point_extend};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, parse_relation, Arg, Expr, Sym};
use crate::grading::series::{WeightedSeries, Window};
use crate::grading::varspec::VarSpec;
use crate::grading::{LambdaPoly, Monomial};
use crate::rational::Rational;
use crate::relations::catalog::weight_screen;
use crate::relations::verify::{Check, Verifier};
use crate::relations::{ReliableWindow, Verdict, VerificationReport};

/// Right-hand side of the two-term formula before adding the `u ↔ v` image;
/// unmarked symbols are at `u`.
const TWO_TERM: &str = "-P11*P44(v) + P12*P24(v) - 3/4*P14*P22(v) + 1/3*P13*Q2444(v) \
    + 1/12*P14*Q3333(v) + 1/6*P23*Q2333(v) + 1/3*P33*Q1334(v) - 1/3*P34*Q1333(v) \
    - 1/12*Q2222 - 1/3*l4*Q1333 + 1/6*l3*Q2333 - 1/2*l3*P23*P33(v) + 1/3*l2*Q2444 \
    + (1/3*l1 + l4*l2 - 3/4*l3^2)*P33";

pub const ZEROTH_ORDER: &str = "-P11*P44 + P12*P24 - 3/4*P14*P22 + 1/3*P13*Q2444 + 1/12*P14*Q3333 \
    + 1/6*P23*Q2333 + 1/3*P33*Q1334 - 1/3*P34*Q1333 - 1/12*Q2222 - 1/3*l4*Q1333 \
    + 1/6*l3*Q2333 - 1/2*l3*P23*P33 + 1/3*l2*Q2444 + (1/3*l1 + l4*l2 - 3/4*l3^2)*P33 = 0";

pub const FIRST_ORDER: &str = "-P11*P144 + P12*P124 - 3/4*P14*P122 + 1/3*P13*Q2444_1 \
    + 1/12*P14*Q3333_1 + 1/6*P23*Q2333_1 + 1/3*P33*Q1334_1 - 1/3*P34*Q1333_1(v) \
    + 1/6*l3*Q2333 - 1/2*l3*P23*P133 - P111*P44 + P112*P24 - 3/4*P114*P22 \
    + 1/3*P113*Q2444 + 1/12*P114*Q3333 + 1/6*P123*Q2333 + 1/3*P133*Q1334 \
    - 1/3*P134*Q1333 - 1/12*Q2222_1 - 1/3*l4*Q1333_1 + 1/6*l3*Q2333_1 \
    - 1/2*l3*P123*P33 + 1/3*l2*Q2444_1 + (1/3*l1 + l4*l2 - 3/4*l3^2)*P133 = 0";

/// The listed first-order identity with the stray `(v)` read as `u` and the
/// underived `λ₃Q₂₃₃₃/6` term dropped.
pub const FIRST_ORDER_REPAIRED: &str = "-P11*P144 + P12*P124 - 3/4*P14*P122 + 1/3*P13*Q2444_1 \
    + 1/12*P14*Q3333_1 + 1/6*P23*Q2333_1 + 1/3*P33*Q1334_1 - 1/3*P34*Q1333_1 \
    - 1/2*l3*P23*P133 - P111*P44 + P112*P24 - 3/4*P114*P22 \
    + 1/3*P113*Q2444 + 1/12*P114*Q3333 + 1/6*P123*Q2333 + 1/3*P133*Q1334 \
    - 1/3*P134*Q1333 - 1/12*Q2222_1 - 1/3*l4*Q1333_1 + 1/6*l3*Q2333_1 \
    - 1/2*l3*P123*P33 + 1/3*l2*Q2444_1 + (1/3*l1 + l4*l2 - 3/4*l3^2)*P133 = 0";

/// Right-hand side of the double-angle formula for `σ(2u)/σ(u)⁴`.
pub const DOUBLE_ANGLE: &str = "1/6*P33*P122334 - 7/12*P1224*P33^2 - 3/4*l3*P23*P2233 \
    + 1/2*P222^2 - 1/24*P222222 + 1/6*l2*P222444 + 1/2*l1*P2233 - 3/8*l3^2*P2233 \
    + 1/6*P1223*P2444 + 1/6*P2233*P1334 + 1/24*P1224*P3333 + 1/24*P14*P223333 \
    + 1/6*P13*P222444 - P23*P233*P223 + 1/12*P23*P222333 - 1/2*P2233*P23^2 \
    + 1/3*P33*P2234*P13 + 1/12*P2223*P2333 - 1/2*P14*P233^2 - l2*P44*P2224 \
    - 2*l2*P244*P224 - l2*P2244*P24 + 1/2*l2*l4*P2233 - P1223*P44*P24 \
    - P13*P44*P2244 - 2*P13*P2244*P24 - P23*P33*P2223 - 7/6*P33*P14*P2233 \
    - 2/3*P33*P124*P233 - 4/3*P33*P234*P123 + 1/3*P34*P33*P1233 + 2*P34*P233*P123 \
    + 1/3*P34*P2233*P13 + l4*P33*P1233 + 2*l4*P233*P123 + l4*P2233*P13 \
    - l3*P233*P223 - 3/4*l3*P2223*P33 - 3/8*P1224*P22 + 1/2*P1222*P24 \
    - 1/2*P1122*P44 + 1/2*P12*P2224 - 1/2*P11*P2244 + 1/2*P2222*P22 \
    + 1/12*l3*P222333 - 3/8*P14*P2222 - 1/6*l4*P122333 - 1/6*P34*P122333";

fn half() -> LambdaPoly {
    LambdaPoly::constant(Rational::new(1, 2))
}

/// The full symmetrized right-hand side in `u` and `v`.
pub fn two_term_rhs() -> Expr {
    let t = parse_expr(TWO_TERM).expect("well-formed constant");
    t.add(&t.swap_args())
}

/// The two-term right-hand side on the diagonal `v = u`, halved.
pub fn zeroth_order_derived() -> Expr {
    parse_expr(TWO_TERM).expect("well-formed constant").map_arg(Arg::V, Arg::U)
}

/// `∂ₖ` of the zeroth-order identity.
pub fn first_order_derived(k: u8) -> Expr {
    zeroth_order_derived().derivative(k, Arg::U)
}

/// `½ ∂²/∂v₂²` of the two-term right-hand side at `v = u`, which equals
/// `σ(2u)/σ(u)⁴` because σ's quadratic part has `u₂²` with coefficient 1.
pub fn double_angle_derived() -> Expr {
    two_term_rhs()
        .derivative(2, Arg::V)
        .derivative(2, Arg::V)
        .map_arg(Arg::V, Arg::U)
        .scale(&half())
}

pub fn double_angle_printed() -> Expr {
    parse_expr(DOUBLE_ANGLE).expect("well-formed constant")
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub struct AdditionOptions {
    /// Overrides the verifier's λ-grade budget for the bivariate check.
    pub lambda_grade: Option<u32>,
}

fn report_from_check(v: &Verifier, suite: &str, id: &str, c: &Check, started: Instant) -> VerificationReport {
    let mut r = VerificationReport::new(suite, id, c.verdict(v.options().min_slack));
    r.cleared_power = Some(c.cleared_power);
    r.window = Some(c.window);
    r.residual_terms = c.residual.len();
    r.lowest_residual = c.lowest_residual();
    r.sigma = v.sigma_hash().map(str::to_string);
    if v.options().timings {
        r.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    r
}

/// `σ(u+v)σ(u−v) − σ(u)²σ(v)²·RHS(u, v)` over the uv variables.
pub fn two_term_residual(v: &Verifier, opts: AdditionOptions) -> Result<Check> {
    two_term_residual_for(v, &two_term_rhs(), opts)
}

/// The same residual for any right-hand side with at most double poles in
/// each argument.
pub fn two_term_residual_for(v: &Verifier, rhs_expr: &Expr, opts: AdditionOptions) -> Result<Check> {
    let grade = opts.lambda_grade.unwrap_or(v.options().lambda_grade);
    let lf = Some(-3 * grade as i64);
    let lo = 16;
    let cap = Window::Upto(lo + 3 * grade as i64);
    let ctx = v.context();
    let sigma = ctx.sigma();

    let plus = two_point_extend(sigma, false)?.lambda_truncate(-3 * grade as i64);
    let minus = two_point_extend(sigma, true)?.lambda_truncate(-3 * grade as i64);
    let lhs = product_graded(&[&plus, &minus], cap, lf)?;

    let uv = VarSpec::uv();
    let rhs_expr = &v.specialize(rhs_expr);
    let mut cache: FxHashMap<Vec<Sym>, Arc<WeightedSeries>> = FxHashMap::default();
    let mut numerator = |syms: Vec<Sym>| -> Result<Arc<WeightedSeries>> {
        if let Some(s) = cache.get(&syms) {
            return Ok(s.clone());
        }
        let e = Expr::term(syms.clone(), LambdaPoly::one());
        if pole_order(&e) > 2 {
            return Err(Error::Config(format!("{e} has more than a double pole")));
        }
        let s = Arc::new(ctx.cleared_to(&e, 2, cap)?);
        cache.insert(syms, s.clone());
        Ok(s)
    };
    let mut rhs = WeightedSeries::zero(uv.clone(), Window::Exact);
    for (syms, coeff) in rhs_expr.terms() {
        let us: Vec<Sym> = syms.iter().filter(|s| s.arg() == Arg::U).cloned().collect();
        let vs: Vec<Sym> = syms.iter().filter(|s| s.arg() == Arg::V).map(|s| s.with_arg(Arg::U)).collect();
        let a = numerator(us)?.embed(uv.clone(), &[0, 1, 2, 3])?;
        let b = numerator(vs)?.embed(uv.clone(), &[4, 5, 6, 7])?;
        let t = product_graded(&[&a, &b], cap, lf)?.scale_lambda(coeff);
        rhs = rhs.add(&t)?;
    }
    let residual = lhs.sub(&rhs)?;
    let hi = residual.window().min(cap).value();
    Ok(Check {
        cleared_power: 2,
        window: ReliableWindow { lo, hi },
        residual,
    })
}

/// Symmetry of the assembled right-hand side and the bivariate identity.
pub fn verify_two_term_addition(v: &Verifier, opts: AdditionOptions) -> Result<Vec<VerificationReport>> {
    let started = Instant::now();
    let rhs = two_term_rhs();
    let sym = VerificationReport::boolean("addition", "addition:rhs-symmetric", rhs == rhs.swap_args(), Verdict::Pass);
    let c = two_term_residual(v, opts)?;
    let mut main = report_from_check(v, "addition", "addition:two-term", &c, started);
    main.expected = Some(Verdict::Pass);
    main.relation = Some(format!("σ(u+v)σ(u−v)/(σ(u)²σ(v)²) = {rhs}"));
    Ok(vec![sym, main])
}

/// `σ(2u)` as a series in `u`.
pub fn sigma_doubled(sigma: &WeightedSeries) -> Result<WeightedSeries> {
    let spec = sigma.spec().clone();
    let images: Vec<WeightedSeries> = (0..spec.arity())
        .map(|i| WeightedSeries::var(spec.clone(), i).scale(&Rational::from_int(2)))
        .collect();
    sigma.substitute(&images, sigma.window())
}

/// Coefficient of `u₂²` in σ, the normalization the double-angle formula relies on.
pub fn quadratic_u2_coefficient(sigma: &WeightedSeries) -> Rational {
    sigma.coeff(Monomial::var(1).with(1, 2))
}

/// Single-argument corollary reports: zeroth order as listed and derived,
/// first order as listed, repaired and derived for every direction, and
/// both forms of the double angle.
pub fn verify_addition_corollaries(v: &Verifier) -> Result<Vec<VerificationReport>> {
    let suite = "corollaries";
    let mut out = Vec::new();

    let (l0, r0) = parse_relation(ZEROTH_ORDER)?;
    let printed0 = l0.sub(&r0);
    let mut r = v.report_expr(suite, "cor:zeroth-order", ZEROTH_ORDER, &printed0, Some(Verdict::Pass));
    r.weight_screen = Some(weight_screen(&l0, &r0));
    out.push(r);
    let derived0 = zeroth_order_derived();
    out.push(
        VerificationReport::boolean(suite, "cor:zeroth-order-matches-diagonal", derived0 == printed0, Verdict::Pass)
            .with_note("listed form equals the two-term right-hand side restricted to v = u"),
    );

    let (l1, r1) = parse_relation(FIRST_ORDER)?;
    let mut r = v.report_expr(suite, "cor:first-order-as-listed", FIRST_ORDER, &l1.sub(&r1), Some(Verdict::Fail));
    r.weight_screen = Some(weight_screen(&l1, &r1));
    out.push(r);
    let (lr, rr) = parse_relation(FIRST_ORDER_REPAIRED)?;
    let repaired = lr.sub(&rr);
    let mut r = v.report_expr(suite, "cor:first-order-repaired", FIRST_ORDER_REPAIRED, &repaired, Some(Verdict::Pass));
    r.weight_screen = Some(weight_screen(&lr, &rr));
    out.push(r);
    out.push(
        VerificationReport::boolean(
            suite,
            "cor:first-order-repaired-is-derivative",
            repaired == first_order_derived(1),
            Verdict::Pass,
        )
        .with_note("repaired form equals the u1-derivative of the zeroth-order identity"),
    );
    for k in 1..=4u8 {
        let e = first_order_derived(k);
        out.push(v.report_expr(suite, &format!("cor:first-order-derived-{k}"), &format!("d/du{k} of zeroth order"), &e, Some(Verdict::Pass)));
    }

    let sigma = v.context().sigma();
    let c22 = quadratic_u2_coefficient(sigma);
    if c22 != Rational::one() {
        return Err(Error::Config(format!("σ has u2² coefficient {c22}, expected 1")));
    }
    let doubled = sigma_doubled(sigma)?;
    for (id, expr, expected) in [
        ("cor:double-angle-as-listed", double_angle_printed(), Verdict::Fail),
        ("cor:double-angle-derived", double_angle_derived(), Verdict::Pass),
    ] {
        let screen = weight_screen(&expr, &Expr::zero());
        let started = Instant::now();
        let c = v.check_against(&expr, Some((&doubled, 4)))?;
        let mut r = report_from_check(v, suite, id, &c, started);
        r.expected = Some(expected);
        r.relation = Some(format!("σ(2u)/σ(u)⁴ = {expr}"));
        r.weight_screen = Some(screen);
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_is_homogeneous_and_symmetric() {
        let r = two_term_rhs();
        let mut ws = r.term_weights();
        ws.dedup();
        assert_eq!(ws, vec![-16]);
        assert_eq!(r, r.swap_args());
    }

    #[test]
    fn listed_zeroth_order_is_the_diagonal() {
        let (l, r) = parse_relation(ZEROTH_ORDER).unwrap();
        assert_eq!(l.sub(&r), zeroth_order_derived());
    }

    #[test]
    fn first_order_forms() {
        let (l, r) = parse_relation(FIRST_ORDER_REPAIRED).unwrap();
        assert_eq!(l.sub(&r), first_order_derived(1));
        let (l, r) = parse_relation(FIRST_ORDER).unwrap();
        assert!(!weight_screen(&l, &r).is_consistent());
    }

    #[test]
    fn double_angle_weights() {
        let mut ws = double_angle_printed().term_weights();
        ws.sort_unstable();
        ws.dedup();
        assert_eq!(ws, vec![-24, -22, -21]);
        let mut wd = double_angle_derived().term_weights();
        wd.sort_unstable();
        wd.dedup();
        assert_eq!(wd, vec![-24]);
    }

    #[test]
    fn two_term_holds_at_zero() {
        use crate::relations::verify::VerifyOptions;
        let v = Verifier::from_series(crate::sigma::schur_weierstrass(), VerifyOptions::default()).unwrap();
        let v = v.with_lambdas(std::array::from_fn(|_| Some(Rational::zero())));
        let rhs0 = two_term_rhs();
        let c = two_term_residual_for(&v, &rhs0, AdditionOptions::default()).unwrap();
        assert_eq!(c.window.lo, 16);
        assert!(c.residual.is_zero());
        let bad = rhs0.add(&parse_expr("Q2222 + Q2222(v)").unwrap());
        assert!(!two_term_residual_for(&v, &bad, AdditionOptions::default()).unwrap().residual.is_zero());
    }

    #[test]
    fn doubling_scales_by_degree() {
        let s = crate::sigma::schur_weierstrass();
        let d = sigma_doubled(&s).unwrap();
        for (m, c) in s.iter() {
            let deg = m.main_degree() as i32;
            assert_eq!(d.coeff(*m), c * &Rational::from_int(2).pow(deg));
        }
        assert_eq!(quadratic_u2_coefficient(&s), Rational::one());
    }
}
