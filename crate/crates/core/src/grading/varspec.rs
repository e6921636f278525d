use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::grading::monomial::{Monomial, LAMBDA_COUNT, MAIN_SLOTS};

/// Ordered main variables with their Sato weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpec {
    names: Vec<String>,
    weights: Vec<i64>,
}

pub const U_WEIGHTS: [i64; 4] = [7, 4, 2, 1];

macro_rules! shared_spec {
    ($name:ident, $body:expr) => {
        pub fn $name() -> Arc<VarSpec> {
            static CELL: OnceLock<Arc<VarSpec>> = OnceLock::new();
            CELL.get_or_init(|| Arc::new($body)).clone()
        }
    };
}

impl VarSpec {
    pub fn new(names: Vec<String>, weights: Vec<i64>) -> Result<VarSpec> {
        if names.len() != weights.len() {
            return Err(Error::Arity {
                expected: names.len(),
                got: weights.len(),
            });
        }
        if names.len() > MAIN_SLOTS {
            return Err(Error::SpecMismatch(format!(
                "at most {MAIN_SLOTS} variables are supported"
            )));
        }
        Ok(VarSpec { names, weights })
    }

    fn fixed(names: &[&str], weights: &[i64]) -> VarSpec {
        VarSpec::new(
            names.iter().map(|s| s.to_string()).collect(),
            weights.to_vec(),
        )
        .expect("static variable set")
    }

    shared_spec!(u, VarSpec::fixed(&["u1", "u2", "u3", "u4"], &U_WEIGHTS));
    shared_spec!(
        uv,
        VarSpec::fixed(
            &["u1", "u2", "u3", "u4", "v1", "v2", "v3", "v4"],
            &[7, 4, 2, 1, 7, 4, 2, 1]
        )
    );
    shared_spec!(curve, VarSpec::fixed(&["x", "y", "z", "w"], &[-3, -5, -3, -5]));
    shared_spec!(t1, VarSpec::fixed(&["t"], &[1]));
    shared_spec!(t2, VarSpec::fixed(&["t1", "t2"], &[1, 1]));
    shared_spec!(t3, VarSpec::fixed(&["t1", "t2", "t3"], &[1, 1, 1]));

    /// The `k`-point parameter space `t1..tk` (`k = 1` is the single `t`).
    pub fn points(k: usize) -> Arc<VarSpec> {
        match k {
            1 => VarSpec::t1(),
            2 => VarSpec::t2(),
            3 => VarSpec::t3(),
            _ => panic!("at most three points"),
        }
    }

    /// Text form `u1^2*u4*l3` of a monomial, `1` when empty.
    pub fn label(&self, m: Monomial) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, n) in self.names.iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(n.clone()),
                e => parts.push(format!("{n}^{e}")),
            }
        }
        if m.has_lambda() {
            let mut s = String::new();
            let _ = crate::grading::lambda::write_lambda_monomial(&mut s, m.lambda_part());
            parts.push(s);
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Main-variable weight of a monomial.
    #[inline]
    pub fn main_weight(&self, m: Monomial) -> i64 {
        let mut w = 0;
        for (i, &wi) in self.weights.iter().enumerate() {
            w += m.exp(i) as i64 * wi;
        }
        w
    }

    /// Main weight plus λ-weight.
    pub fn total_weight(&self, m: Monomial) -> i64 {
        self.main_weight(m) + m.lambda_weight()
    }

    /// Weight of an explicit exponent tuple pair.
    pub fn weight_of(&self, main: &[u32], lambda: &[u32]) -> Result<i64> {
        if main.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: main.len(),
            });
        }
        if lambda.len() != LAMBDA_COUNT {
            return Err(Error::Arity {
                expected: LAMBDA_COUNT,
                got: lambda.len(),
            });
        }
        Ok(self.total_weight(Monomial::from_parts(main, lambda)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        let u = VarSpec::u();
        assert_eq!(u.weight_of(&[0, 0, 0, 1], &[0; 5]).unwrap(), 1);
        assert_eq!(u.weight_of(&[1, 0, 0, 1], &[0; 5]).unwrap(), 8);
        assert_eq!(u.weight_of(&[0, 0, 0, 3], &[0, 0, 0, 0, 1]).unwrap(), 0);
        assert!(u.weight_of(&[0, 0, 1], &[0; 5]).is_err());
    }

    #[test]
    fn curve_is_homogeneous() {
        let c = VarSpec::curve();
        let y3 = c.weight_of(&[0, 3, 0, 0], &[0; 5]).unwrap();
        for j in 0..5u32 {
            let mut l = [0u32; 5];
            l[j as usize] = 1;
            assert_eq!(c.weight_of(&[j, 0, 0, 0], &l).unwrap(), y3);
        }
        assert_eq!(c.weight_of(&[5, 0, 0, 0], &[0; 5]).unwrap(), -15);
    }

    #[test]
    fn shared_specs_are_shared() {
        assert!(Arc::ptr_eq(&VarSpec::u(), &VarSpec::u()));
        assert_eq!(VarSpec::uv().index_of("v3").unwrap(), 6);
        assert!(VarSpec::u().index_of("q").is_err());
    }
}
