use crate::error::Result;
use crate::relations::catalog::{load_catalog, RelationEntry, Section, WeightScreen};
use crate::relations::verify::Verifier;
use crate::relations::{Verdict, VerificationReport};

/// A listed relation in doubt together with the readings tried for it.
#[derive(Clone, Debug)]
pub struct SuspectGroup {
    pub name: String,
    /// `(variant label, relation text)`; the first one is the listed form.
    pub variants: Vec<(String, String)>,
}

fn entry(section: Section, id: &str) -> RelationEntry {
    load_catalog(section)
        .into_iter()
        .find(|e| e.id == id)
        .expect("catalog id")
}

fn with_suggestions(name: &str, listed: &RelationEntry, extra: &[(&str, &str)]) -> SuspectGroup {
    let mut variants = vec![("listed".to_string(), listed.text.clone())];
    for (label, text) in extra {
        variants.push((label.to_string(), text.to_string()));
    }
    if let WeightScreen::Inconsistent { suggestions, .. } = &listed.screen {
        for (i, s) in suggestions.iter().enumerate() {
            variants.push((format!("suggested-{}", i + 1), s.clone()));
        }
    }
    let mut seen = Vec::new();
    variants.retain(|(_, t)| {
        let key = crate::expr::parse_relation(t).map(|(l, r)| l.sub(&r).to_string()).unwrap_or_else(|_| t.clone());
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
    SuspectGroup {
        name: name.into(),
        variants,
    }
}

pub fn suspect_groups() -> Vec<SuspectGroup> {
    vec![
        with_suggestions("Q1223", &entry(Section::FourIndex, "4i:Q1223"), &[]),
        with_suggestions(
            "Q1344",
            &entry(Section::Misc, "misc:early-1344"),
            &[("later-form", "Q1344 = 2*l4*P14 - P12")],
        ),
        with_suggestions(
            "Q2234",
            &entry(Section::FourIndex, "4i:Q2234"),
            &[("single-P12", "Q2234 = -2*P12 + 4*l4*P14 + 3*l3*P24 - 2*l2*P44")],
        ),
        with_suggestions(
            "Q2344",
            &entry(Section::FourIndex, "4i:Q2344"),
            &[("negated", "Q2344 = 4*P14 - P22 + 2*l4*P24")],
        ),
        with_suggestions(
            "Q2334",
            &entry(Section::FourIndex, "4i:Q2334"),
            &[("with-l2", "Q2334 = 2*P13 + 3*l3*P34 + l2")],
        ),
        with_suggestions(
            "Q2223",
            &entry(Section::FourIndex, "4i:Q2223"),
            &[("rederived", "Q2223 = -6*P11 + 6*l3*P14 + 3*l3*P22 - 6*l1*P44")],
        ),
        with_suggestions(
            "P144",
            &entry(Section::ThreeIndexLinear, "3l:P144"),
            &[("half-P24-P344", "P144 = -1/2*P334*P33 + 1/2*P333*P34 + 1/2*P344*P24 - 1/2*P34*P244")],
        ),
        with_suggestions(
            "P344sq",
            &entry(Section::Misc, "misc:early-344sq"),
            &[("product-form", "P344^2 = 4*P34^2*P44 + 4*P24*P34 + P33^2 + 4*P14")],
        ),
    ]
}

/// One report per variant, then a summary per group naming the variants
/// that hold.
pub fn verify_suspects(v: &Verifier) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for g in suspect_groups() {
        let mut holding = Vec::new();
        for (label, text) in &g.variants {
            let id = format!("suspect:{}:{label}", g.name);
            let mut r = v.verify_text("suspects", &id, text, None)?;
            if let Some(WeightScreen::Inconsistent { .. }) = &r.weight_screen {
                r.expected = Some(Verdict::Fail);
            }
            if r.verdict == Verdict::Pass {
                holding.push(label.clone());
            }
            out.push(r);
        }
        let note = if holding.is_empty() {
            "no variant holds".to_string()
        } else {
            format!("holds: {}", holding.join(", "))
        };
        out.push(
            VerificationReport::boolean("suspects", format!("suspect:{}", g.name), !holding.is_empty(), Verdict::Pass)
                .with_note(note),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_have_distinct_variants() {
        let gs = suspect_groups();
        assert_eq!(gs.len(), 8);
        for g in &gs {
            assert_eq!(g.variants[0].0, "listed");
            assert!(g.variants.len() >= 2, "{}", g.name);
        }
        let q1223 = &gs[0];
        assert!(q1223.variants.iter().any(|(_, t)| t.starts_with("Q1233 =")));
    }
}
