use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::relations::addition::{verify_addition_corollaries, verify_two_term_addition, AdditionOptions};
use crate::relations::basis::verify_basis;
use crate::relations::catalog::{load_catalog, Section};
use crate::relations::checks::{verify_controls, verify_curve, verify_puiseux};
use crate::relations::suspects::verify_suspects;
use crate::relations::verify::Verifier;
use crate::relations::VerificationReport;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Catalog(Section),
    Addition,
    Corollaries,
    Basis,
    Suspects,
    Controls,
    Curve,
    Puiseux,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Curve,
        Suite::Puiseux,
        Suite::Catalog(Section::FourIndex),
        Suite::Catalog(Section::ThreeIndexLinear),
        Suite::Catalog(Section::ThreeIndexQuadratic),
        Suite::Catalog(Section::QuadFourIndex),
        Suite::Catalog(Section::Misc),
        Suite::Basis,
        Suite::Addition,
        Suite::Corollaries,
        Suite::Suspects,
        Suite::Controls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Catalog(s) => s.name(),
            Suite::Addition => "addition",
            Suite::Corollaries => "corollaries",
            Suite::Basis => "basis",
            Suite::Suspects => "suspects",
            Suite::Controls => "controls",
            Suite::Curve => "curve",
            Suite::Puiseux => "puiseux",
        }
    }

    /// Whether the suite needs σ at all.
    pub fn needs_sigma(self) -> bool {
        !matches!(self, Suite::Curve)
    }

    /// Parses a name or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',').map(|p| p.trim().parse()).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Runs one suite; catalog entries are checked in parallel and reported in
/// listed order.
pub fn run_suite(v: &Verifier, suite: Suite) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Catalog(section) => {
            let entries = load_catalog(section);
            Ok(entries.par_iter().map(|e| v.verify_entry(section.name(), e)).collect())
        }
        Suite::Addition => verify_two_term_addition(v, AdditionOptions::default()),
        Suite::Corollaries => verify_addition_corollaries(v),
        Suite::Basis => verify_basis(v),
        Suite::Suspects => verify_suspects(v),
        Suite::Controls => verify_controls(v),
        Suite::Curve => Ok(verify_curve()),
        Suite::Puiseux => verify_puiseux(Some(v.context().sigma())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), 12);
        assert_eq!(Suite::parse_list("curve, basis").unwrap(), vec![Suite::Curve, Suite::Basis]);
        assert!(Suite::parse_list("nope").is_err());
    }
}
