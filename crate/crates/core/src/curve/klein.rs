use crate::curve::fraction::Point;
use crate::curve::{curve_equation, reduce_mod_curve, CurveFraction, CurvePoly, W, X, Y, Z};
use crate::grading::monomial::Monomial;
use crate::grading::series::{WeightedSeries, Window};
use crate::rational::Rational;

fn poly(terms: &[([u32; 4], [u32; 5], i64)]) -> CurvePoly {
    CurvePoly::from_terms(terms.iter().map(|(e, l, c)| (*e, *l, Rational::from_int(*c))))
}

/// The symmetric numerator `F(x, y; z, w)` of the second-kind 2-form.
pub fn klein_f() -> CurvePoly {
    // exponents are [x, y, z, w], λ-exponents [λ0..λ4]
    let zero = [0; 5];
    let l = |j: usize| {
        let mut e = [0; 5];
        e[j] = 1;
        e
    };
    poly(&[
        ([0, 2, 0, 2], zero, 3),
        // y-bracket
        ([2, 1, 3, 0], zero, 2),
        ([1, 1, 4, 0], zero, 1),
        ([0, 1, 0, 0], l(0), 3),
        ([0, 1, 1, 0], l(1), 2),
        ([1, 1, 0, 0], l(1), 1),
        ([0, 1, 2, 0], l(2), 1),
        ([1, 1, 1, 0], l(2), 2),
        ([1, 1, 2, 0], l(3), 3),
        ([1, 1, 3, 0], l(4), 2),
        ([2, 1, 2, 0], l(4), 1),
        // w-bracket
        ([3, 0, 2, 1], zero, 2),
        ([4, 0, 1, 1], zero, 1),
        ([0, 0, 0, 1], l(0), 3),
        ([1, 0, 0, 1], l(1), 2),
        ([0, 0, 1, 1], l(1), 1),
        ([2, 0, 0, 1], l(2), 1),
        ([1, 0, 1, 1], l(2), 2),
        ([2, 0, 1, 1], l(3), 3),
        ([3, 0, 1, 1], l(4), 2),
        ([2, 0, 2, 1], l(4), 1),
    ])
}

/// Drops the terms of negative degree in `slot` after dividing by `slot^k`.
pub fn bracket_divide(p: &WeightedSeries, slot: usize, k: u32) -> WeightedSeries {
    let terms = p.iter().filter(|(m, _)| m.exp(slot) >= k).map(|(m, c)| {
        let e = m.exp(slot);
        (m.with(slot, e - k), c.clone())
    });
    WeightedSeries::from_terms(p.spec().clone(), terms.collect::<Vec<(Monomial, Rational)>>(), Window::Exact)
}

/// `Ω((x,y),(z,w)) = Σₖ y^{3−k} [f(z,w)/w^{4−k}]_w / ((x − z) · 3y²)`.
pub fn build_omega() -> CurveFraction {
    let f = curve_equation(Z, W);
    let mut num = CurvePoly::zero();
    for k in 1..=3u32 {
        let br = reduce_mod_curve(&bracket_divide(&f, W, 4 - k)).expect("curve variable set");
        num = num.add(&CurvePoly::var(Y).pow(3 - k).mul(&br));
    }
    CurveFraction::new(num, fy(Point::First), 1)
}

fn fy(p: Point) -> CurvePoly {
    let s = match p {
        Point::First => Y,
        Point::Second => W,
    };
    CurvePoly::var(s).pow(2).scale(&Rational::from_int(3))
}

/// Which η numerators to use.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum EtaVariant {
    /// The numerators exactly as tabulated.
    Printed,
    /// `h₁` gains `λ₂y` and `h₃` loses `−λ₂`; these satisfy the symmetry and
    /// numerator identities.
    Adjusted,
}

/// Which point the Ω-derivative moves.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RDerivative {
    /// `d/dx Ω(x,y;z,w)`, the η's sitting at `(z, w)`.
    AlongFirst,
    /// `d/dz Ω(x,y;z,w)`, the point carrying the η's.
    AlongSecond,
}

/// Numerators of ω₁..ω₄ and η₁..η₄ over the common denominator `3y²`, as
/// polynomials in `(x, y)`.
#[derive(Clone, Debug)]
pub struct DifferentialSet {
    pub variant: EtaVariant,
    pub u: [CurvePoly; 4],
    pub h: [CurvePoly; 4],
}

impl DifferentialSet {
    pub fn new(variant: EtaVariant) -> Self {
        let zero = [0; 5];
        let l = |j: usize| {
            let mut e = [0; 5];
            e[j] = 1;
            e
        };
        let u = [
            CurvePoly::one(),
            CurvePoly::var(X),
            CurvePoly::var(Y),
            CurvePoly::var(X).pow(2),
        ];
        let mut h1 = vec![([3, 1, 0, 0], zero, 7), ([2, 1, 0, 0], l(4), 5), ([1, 1, 0, 0], l(3), 3)];
        let h2 = vec![([2, 1, 0, 0], zero, 4), ([1, 1, 0, 0], l(4), 2)];
        let mut h3 = vec![([3, 0, 0, 0], zero, 2), ([2, 0, 0, 0], l(4), 1)];
        let h4 = vec![([1, 1, 0, 0], zero, 1)];
        match variant {
            EtaVariant::Printed => h3.push(([0, 0, 0, 0], l(2), -1)),
            EtaVariant::Adjusted => h1.push(([0, 1, 0, 0], l(2), 1)),
        }
        DifferentialSet {
            variant,
            u,
            h: [poly(&h1), poly(&h2), poly(&h3), poly(&h4)],
        }
    }

    /// Weight of `ωⱼ` and `ηⱼ` as differentials, with `dx` weighing −3.
    pub fn weights(&self) -> ([Option<i64>; 4], [Option<i64>; 4]) {
        let w = |p: &CurvePoly| match p.weights().as_slice() {
            [w] => Some(w + 10 - 3),
            _ => None,
        };
        (
            [w(&self.u[0]), w(&self.u[1]), w(&self.u[2]), w(&self.u[3])],
            [w(&self.h[0]), w(&self.h[1]), w(&self.h[2]), w(&self.h[3])],
        )
    }
}

/// Options for assembling the fundamental 2-form.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct RConfig {
    pub eta: EtaVariant,
    pub derivative: RDerivative,
    /// How many `ωⱼηⱼ` products enter the sum (3 or 4).
    pub terms: usize,
}

impl Default for RConfig {
    fn default() -> Self {
        RConfig {
            eta: EtaVariant::Adjusted,
            derivative: RDerivative::AlongSecond,
            terms: 4,
        }
    }
}

/// `R = dΩ + Σⱼ ωⱼ(x,y) ηⱼ(z,w)` as a function, i.e. with `dx dz` stripped.
pub fn build_r(cfg: RConfig) -> CurveFraction {
    let omega = build_omega();
    let d = match cfg.derivative {
        RDerivative::AlongFirst => omega.total_derivative(Point::First),
        RDerivative::AlongSecond => omega.total_derivative(Point::Second),
    };
    let set = DifferentialSet::new(cfg.eta);
    let mut sum = CurvePoly::zero();
    for j in 0..cfg.terms.min(4) {
        sum = sum.add(&set.u[j].mul(&set.h[j].swap()));
    }
    let den = fy(Point::First).mul(&fy(Point::Second));
    d.add(&CurveFraction::new(sum, den, 0))
}

/// Outcome of the three defining checks on an assembled R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinCheck {
    pub config: RConfig,
    pub symmetric: bool,
    pub pole_normalized: bool,
    pub matches_f: bool,
}

impl KleinCheck {
    pub fn passed(&self) -> bool {
        self.symmetric && self.pole_normalized && self.matches_f
    }
}

pub fn check_r(cfg: RConfig) -> KleinCheck {
    let r = build_r(cfg);
    let symmetric = r.equals(&r.swap());
    let pole_normalized = match r.mul_diag(2).diagonal() {
        Some(lim) => lim.num.sub(&lim.den).is_zero(),
        None => false,
    };
    let target = CurveFraction::new(klein_f(), fy(Point::First).mul(&fy(Point::Second)), 2);
    KleinCheck {
        config: cfg,
        symmetric,
        pole_normalized,
        matches_f: r.equals(&target),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_is_symmetric_and_homogeneous() {
        let f = klein_f();
        assert_eq!(f.swap(), f);
        assert_eq!(f.weights(), vec![-20]);
    }

    #[test]
    fn f_on_the_diagonal_is_fy_squared() {
        let d = klein_f().diagonal();
        assert_eq!(d, CurvePoly::var(Y).pow(4).scale(&Rational::from_int(9)));
    }

    #[test]
    fn omega_numerator() {
        let om = build_omega();
        assert_eq!(om.diag, 1);
        let y = CurvePoly::var(Y);
        let w = CurvePoly::var(W);
        let expected = y.pow(2).add(&y.mul(&w)).add(&w.pow(2));
        assert_eq!(om.num, expected);
        let br = bracket_divide(&curve_equation(Z, W), W, 1);
        assert_eq!(reduce_mod_curve(&br).unwrap(), w.pow(2));
    }

    #[test]
    fn eta_weights_pair_with_omega() {
        for v in [EtaVariant::Printed, EtaVariant::Adjusted] {
            let (wo, we) = DifferentialSet::new(v).weights();
            let wo: Vec<i64> = wo.iter().map(|w| w.unwrap()).collect();
            assert_eq!(wo, vec![7, 4, 2, 1]);
            if v == EtaVariant::Adjusted {
                let we: Vec<i64> = we.iter().map(|w| w.unwrap()).collect();
                assert_eq!(we, vec![-7, -4, -2, -1]);
            }
        }
    }

    #[test]
    fn adjusted_r_passes_all_checks() {
        let c = check_r(RConfig::default());
        assert!(c.passed(), "{c:?}");
    }

    #[test]
    fn printed_eta_fails_the_numerator_check() {
        let c = check_r(RConfig {
            eta: EtaVariant::Printed,
            ..RConfig::default()
        });
        assert!(!c.matches_f);
    }

    #[test]
    fn three_terms_break_symmetry() {
        let c = check_r(RConfig {
            terms: 3,
            ..RConfig::default()
        });
        assert!(!c.symmetric);
    }
}
