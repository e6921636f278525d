use std::fmt;

use crate::curve::{quintic, reduce_mod_curve, CurvePoly, W, X, Y, Z};
use crate::rational::Rational;

/// `num / (den · (x − z)^diag)` with numerator and denominator in normal form.
///
/// The diagonal factor is tracked separately so that pole orders along
/// `x = z` stay visible and can be cancelled exactly.
#[derive(Clone)]
pub struct CurveFraction {
    pub num: CurvePoly,
    pub den: CurvePoly,
    pub diag: u32,
}

/// Which point a total derivative moves.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Point {
    /// `(x, y)`
    First,
    /// `(z, w)`
    Second,
}

fn x_minus_z() -> CurvePoly {
    CurvePoly::var(X).sub(&CurvePoly::var(Z))
}

impl CurveFraction {
    pub fn new(num: CurvePoly, den: CurvePoly, diag: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        CurveFraction { num, den, diag }
    }

    pub fn from_poly(p: CurvePoly) -> Self {
        CurveFraction::new(p, CurvePoly::one(), 0)
    }

    fn lift(&self, diag: u32) -> CurvePoly {
        self.num.mul(&x_minus_z().pow(diag - self.diag))
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.diag.max(o.diag);
        let num = self.lift(d).mul(&o.den).add(&o.lift(d).mul(&self.den));
        CurveFraction::new(num, self.den.mul(&o.den), d)
    }

    pub fn neg(&self) -> Self {
        CurveFraction::new(self.num.neg(), self.den.clone(), self.diag)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        CurveFraction::new(self.num.mul(&o.num), self.den.mul(&o.den), self.diag + o.diag)
    }

    /// Multiplies by `(x − z)^k`, cancelling the tracked factor first.
    pub fn mul_diag(&self, k: u32) -> Self {
        if k <= self.diag {
            CurveFraction::new(self.num.clone(), self.den.clone(), self.diag - k)
        } else {
            CurveFraction::new(self.lift(k), self.den.clone(), 0)
        }
    }

    /// Total derivative along the curve, moving the chosen point.
    /// `dy/dx = p'(x)/(3y²)` for the first point, likewise for the second.
    pub fn total_derivative(&self, point: Point) -> Self {
        let (xs, ys) = match point {
            Point::First => (X, Y),
            Point::Second => (Z, W),
        };
        let fy = CurvePoly::var(ys).pow(2).scale(&Rational::from_int(3));
        let px = reduce_mod_curve(&quintic(xs).derivative(xs).expect("slot")).expect("curve");
        let d = |p: &CurvePoly| p.partial(xs).mul(&fy).add(&p.partial(ys).mul(&px));
        let n = &self.num;
        let den = &self.den;
        let mut num = d(n).mul(den).sub(&n.mul(&d(den))).mul(&x_minus_z());
        if self.diag > 0 {
            // d/dx (x − z)^(−k) = −k (x − z)^(−k−1), and +k for d/dz
            let k = Rational::from_int(self.diag as i64);
            let sign = match point {
                Point::First => -&k,
                Point::Second => k,
            };
            num = num.add(&n.mul(den).mul(&fy).scale(&sign));
        }
        CurveFraction::new(num, den.mul(den).mul(&fy), self.diag + 1)
    }

    /// Exchanges the two points; `(z − x)^k = (−1)^k (x − z)^k`.
    pub fn swap(&self) -> Self {
        let mut num = self.num.swap();
        if self.diag % 2 == 1 {
            num = num.neg();
        }
        CurveFraction::new(num, self.den.swap(), self.diag)
    }

    /// Exact equality modulo the curve ideals.
    pub fn equals(&self, o: &Self) -> bool {
        let d = self.diag.max(o.diag);
        let lhs = self.lift(d).mul(&o.den);
        let rhs = o.lift(d).mul(&self.den);
        lhs.sub(&rhs).is_zero()
    }

    /// Restriction to `(z, w) = (x, y)`; requires no diagonal pole.
    pub fn diagonal(&self) -> Option<CurveFraction> {
        if self.diag > 0 {
            return None;
        }
        let den = self.den.diagonal();
        if den.is_zero() {
            return None;
        }
        Some(CurveFraction::new(self.num.diagonal(), den, 0))
    }
}

impl fmt::Debug for CurveFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (({}) (x - z)^{})", self.num, self.den, self.diag)
    }
}
