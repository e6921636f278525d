use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expr, Sym};

const P_COEFFS: [&str; 5] = [
    "P13*P34 - P14*P344 - P14*P33 + P144*P34",
    "-P13 - P144 + P244*P34 + P23*P34 - P24*P344 - P24*P33",
    "-P34*l4 - P44*P33 + P444*P34 + P34^2 - P244 - P23 - P44*P344",
    "l4 - P444 - 3*P34",
    "2",
];

/// The quartic in `x` whose roots are the x-coordinates of the Abel
/// preimage, together with the linear relation fixing each `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiPolynomial {
    /// Coefficient of `xᵏ` at index `k`.
    pub coeffs: [Expr; 5],
    /// Coefficients of `1, x, y, x², xy` in `℘₁₄ + ℘₂₄x + ℘₃₄y + ℘₄₄x² − xy = 0`.
    pub y_relation: [Expr; 5],
}

fn parsed(texts: &[&str; 5]) -> [Expr; 5] {
    texts.map(|t| parse_expr(t).expect("well-formed constant"))
}

/// Builds the polynomial; with `table = None` the ℘'s stay symbolic,
/// otherwise every ℘ appearing must have an entry.
pub fn jacobi_polynomial(table: Option<&BTreeMap<Sym, Expr>>) -> Result<JacobiPolynomial> {
    let coeffs = parsed(&P_COEFFS);
    let y_relation = parsed(&["P14", "P24", "P34", "P44", "-1"]);
    let Some(table) = table else {
        return Ok(JacobiPolynomial { coeffs, y_relation });
    };
    for e in coeffs.iter().chain(y_relation.iter()) {
        for s in e.symbols() {
            if !table.contains_key(&s) {
                return Err(Error::MissingSymbol(s.to_string()));
            }
        }
    }
    Ok(JacobiPolynomial {
        coeffs: coeffs.map(|e| e.substitute(table)),
        y_relation: y_relation.map(|e| e.substitute(table)),
    })
}

impl JacobiPolynomial {
    /// Term weights of each coefficient with `x` counted; homogeneous means
    /// a single entry equal to −12.
    pub fn weight_audit(&self) -> Vec<Vec<i64>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut ws: Vec<i64> = c.term_weights().into_iter().map(|w| w - 3 * k as i64).collect();
                ws.sort_unstable();
                ws.dedup();
                ws
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_and_cubic_coefficients() {
        let j = jacobi_polynomial(None).unwrap();
        assert_eq!(j.coeffs[4].to_string(), "2");
        assert_eq!(j.coeffs[3], parse_expr("l4 - P444 - 3*P34").unwrap());
    }

    #[test]
    fn coefficients_are_homogeneous() {
        let j = jacobi_polynomial(None).unwrap();
        for ws in j.weight_audit() {
            assert_eq!(ws, vec![-12]);
        }
    }

    #[test]
    fn missing_symbols_are_reported() {
        let table = BTreeMap::new();
        assert!(matches!(jacobi_polynomial(Some(&table)), Err(Error::MissingSymbol(_))));
    }
}
