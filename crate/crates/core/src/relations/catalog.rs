use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_relation, Expr, PIndex, Sym};
use crate::relations::Verdict;

/// Catalog sections.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    FourIndex,
    ThreeIndexLinear,
    ThreeIndexQuadratic,
    QuadFourIndex,
    Misc,
}

impl Section {
    pub const ALL: [Section; 5] = [
        Section::FourIndex,
        Section::ThreeIndexLinear,
        Section::ThreeIndexQuadratic,
        Section::QuadFourIndex,
        Section::Misc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::FourIndex => "four-index",
            Section::ThreeIndexLinear => "three-index-linear",
            Section::ThreeIndexQuadratic => "three-index-quadratic",
            Section::QuadFourIndex => "quad-four-index",
            Section::Misc => "misc",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Section::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown catalog section `{s}`")))
    }
}

/// Outcome of checking that every additive term has the same weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WeightScreen {
    Consistent { weight: i64 },
    Inconsistent {
        lhs: Vec<i64>,
        rhs: Vec<i64>,
        /// Relations obtained by the smallest edits that restore homogeneity.
        suggestions: Vec<String>,
    },
}

impl WeightScreen {
    pub fn is_consistent(&self) -> bool {
        matches!(self, WeightScreen::Consistent { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationEntry {
    pub id: String,
    pub section: Section,
    /// Position within the section as listed.
    pub position: usize,
    pub text: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub screen: WeightScreen,
    pub expected: Option<Verdict>,
    pub note: Option<String>,
}

impl RelationEntry {
    /// Parses `lhs = rhs` and screens weights; the expected verdict follows
    /// the screen unless overridden.
    pub fn new(id: impl Into<String>, section: Section, position: usize, text: &str) -> Result<Self> {
        let (lhs, rhs) = parse_relation(text)?;
        let screen = weight_screen(&lhs, &rhs);
        let expected = Some(if screen.is_consistent() { Verdict::Pass } else { Verdict::Fail });
        Ok(RelationEntry {
            id: id.into(),
            section,
            position,
            text: text.to_string(),
            lhs,
            rhs,
            screen,
            expected,
            note: None,
        })
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_expected(mut self, v: Option<Verdict>) -> Self {
        self.expected = v;
        self
    }

    /// `lhs − rhs`.
    pub fn residual_expr(&self) -> Expr {
        self.lhs.sub(&self.rhs)
    }
}

fn distinct(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v.dedup();
    v
}

pub fn weight_screen(lhs: &Expr, rhs: &Expr) -> WeightScreen {
    let lw = lhs.term_weights();
    let rw = rhs.term_weights();
    let all = distinct(lw.iter().chain(rw.iter()).copied().collect());
    if all.len() <= 1 {
        return WeightScreen::Consistent {
            weight: all.first().copied().unwrap_or(0),
        };
    }
    WeightScreen::Inconsistent {
        lhs: distinct(lw),
        rhs: distinct(rw),
        suggestions: suggest_repairs(lhs, rhs),
    }
}

/// The weight carried by the most additive terms on both sides together.
fn majority_weight(lhs: &Expr, rhs: &Expr) -> i64 {
    let mut counts: Vec<(i64, usize)> = Vec::new();
    for w in lhs.term_weights().into_iter().chain(rhs.term_weights()) {
        match counts.iter_mut().find(|(x, _)| *x == w) {
            Some((_, c)) => *c += 1,
            None => counts.push((w, 1)),
        }
    }
    counts.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    counts.first().map(|c| c.0).unwrap_or(0)
}

/// Single edits of one off-weight term: change one index of one symbol, or
/// drop one repeated factor, so that the term reaches the majority weight.
fn term_repairs(syms: &[Sym], need: i64) -> Vec<Vec<Sym>> {
    let mut out = Vec::new();
    for (i, s) in syms.iter().enumerate() {
        let (idx, rebuild): (&PIndex, Box<dyn Fn(PIndex) -> Sym>) = match s {
            Sym::P { idx, arg } => {
                let arg = *arg;
                (idx, Box::new(move |p| Sym::P { idx: p, arg }))
            }
            Sym::Q { idx, deriv, arg } => {
                let (deriv, arg) = (deriv.clone(), *arg);
                (idx, Box::new(move |p| Sym::Q { idx: p, deriv: deriv.clone(), arg }))
            }
        };
        for pos in 0..idx.len() {
            for k in 1..=4u8 {
                let mut v = idx.indices().to_vec();
                if v[pos] == k {
                    continue;
                }
                v[pos] = k;
                let Ok(p) = PIndex::new(v) else { continue };
                let ns = rebuild(p);
                if ns.weight() - s.weight() == need {
                    let mut t = syms.to_vec();
                    t[i] = ns;
                    t.sort();
                    out.push(t);
                }
            }
        }
        if -s.weight() == need && syms.iter().filter(|x| *x == s).count() > 1 {
            let mut t = syms.to_vec();
            t.remove(i);
            out.push(t);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn suggest_repairs(lhs: &Expr, rhs: &Expr) -> Vec<String> {
    let target = majority_weight(lhs, rhs);
    let mut out = Vec::new();
    for (side, other, is_lhs) in [(lhs, rhs, true), (rhs, lhs, false)] {
        for (syms, c) in side.terms() {
            for (m, mc) in c.terms() {
                let w: i64 = syms.iter().map(Sym::weight).sum::<i64>() + m.lambda_weight();
                if w == target {
                    continue;
                }
                let single = crate::grading::LambdaPoly::monomial(*m, mc.clone());
                let removed = side.sub(&Expr::term(syms.clone(), single.clone()));
                for t in term_repairs(syms, target - w) {
                    let fixed = removed.add(&Expr::term(t, single.clone()));
                    let text = if is_lhs {
                        format!("{fixed} = {other}")
                    } else {
                        format!("{other} = {fixed}")
                    };
                    out.push(text);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

const FOUR_INDEX: [&str; 20] = [
    "Q4444 = -3*P33",
    "Q3444 = 3*P24",
    "Q3344 = -P23 + 2*l4*P34",
    "Q3334 = -Q2444",
    "Q2344 = -4*P14 + P22 - 2*l4*P24",
    "Q3333 = 12*P14 - 3*P22",
    "Q2334 = 2*P13 + 3*l3*P34",
    "Q1444 = -1/2*Q2333 + 3/2*l3*P33",
    "Q2244 = -1/3*Q2333 - 2/3*l4*Q3334 + 2*l3*P33",
    "Q1344 = 2*l4*P14 - P12",
    "Q2234 = -2*P12 - 2*P12 + 4*l4*P14 + 3*l3*P24 - 2*l2*P44",
    "Q1334 = -1/2*Q2233 + 2*l4*P13 + 3/2*l3*P23 + 2*l2*P34 + l4*l2",
    "Q1333 = 3*Q1244 + l4*Q2333 - 3*l4*l3*P33",
    "Q1234 = -P11 + 3*l3*P14 - l1*P44",
    "Q2223 = 6*P11 + 6*l3*P14 + 6*l3*P22 - 6*l1*P44",
    "Q1223 = -3*l0 + l4*l1 + 3*l3*P13 + 2*l1*P34",
    "Q1144 = -Q1224 - 1/2*l3*Q2333 + 3/2*l3^2*P33 + 3*l1*P33",
    "Q1134 = 2/3*l4*Q2223 + (2*l2 - 4*l3*l4)*P14 - l1*P24 + 4*l1*l4*P44 - 2*l3*l4*P22 + 4*l4*P11",
    "Q1223 = -2*l4*P11 + 3*l3*P12 + 4*l2*P14 - 2*l1*P24 - 6*l0*P44",
    "Q1222 = 6*(l0 + l4*l1)*P33 - l3*Q1333 + 2*l1*Q2444",
];

const THREE_INDEX_LINEAR: [&str; 10] = [
    "P333 = 2*P44*P344 - 2*P34*P444 - P244",
    "P234 = 1/2*P34*P344 - P334*P44 + 1/2*P33*P444 + 1/2*l4*P344",
    "P233 = -P33*P344 - 3/2*P444*P24 + 1/2*P334*P34 + 3/2*P244*P44 + 1/2*l4*P334 + 1/2*P333*P44",
    "P144 = -1/2*P334*P33 + 1/2*P333*P34 + P344*P24 - 1/2*P34*P244",
    "P134 = P234*P34 - P24*P334 + 1/2*P33*P244 - 1/2*P344*P23",
    "P133 = 1/2*P333*P24 - P33*P234 - 1/2*P23*P334 + P34*P233 - 3*P444*P14 + 3*P144*P44",
    "P124 = -P134*P44 - 1/2*P144*P34 + P14*P344 + 1/2*P13*P444 + 1/2*l4*P144",
    "P134*P34 = -1/2*P33*P144 + 1/2*P344*P13 + P334*P14",
    "P114 = -1/2*P144*P23 - P134*P24 + P234*P14 + 1/2*P244*P13",
    "P111 = 2/3*P22*P123 + 1/3*P23*P122 + l3*P114 - l1*P144 - 1/3*P13*P222 - 2/3*P223*P12 \
     - 2/3*l2*P124 + 1/3*l1*P224 + l0*P244 + 1/3*l4*P112",
];

const THREE_INDEX_QUADRATIC: [&str; 23] = [
    "P444^2 = 4*P44^3 - 4*P44*P33 + P34^2 - 4*P23 + 2*l4*P34 + l4^2 - 4*l3",
    "P344*P444 = 4*P34*P44^2 + 6*P24*P44 - P33*P34 - P33*l4 - 2/3*P2444",
    "P344^2 = 4*P34^2*P44 + 4*P24*P34 + P33^2 + 4*P14",
    "P334*P444 = 2*P34^2*P44 - P24*P34 - 2*P33^2 - 4*P14 - 2*P44*P23 + 2*P22 - P24*l4 \
     + 2*P44*l4*P34 + 2*P33*P44^2",
    "P334*P344 = 2*P44*P33*P34 + 2*P34^3 - 2*P23*P34 + P24*P33 - 2*P13 + 2*l4*P34^2",
    "P333*P444 = 6*P44*P33*P34 - 2*P34^3 + 7*P34*P23 + 2*P33*P24 + 2*P13 - 4*l4*P34^2 + 2*l2 \
     + 6*P34*l3 + l4*P23 - 2*l4^2*P34 - 2*l4*P44*P33 + 12*P24*P44^2 - 2*P44*P2444",
    "P444*P244 = 2/3*P44*P2444 - 2*P13 + P34*P23 - 2*P33*P24 - 2*l2 + 2*P34*l3 - l4*P23",
    "P334^2 = 4*P33*P34^2 + 8*P34*P24*P44 - 4/3*P2444*P34 + P24^2 - 4/3*P1444 + 4*P44*P14",
    "P344*P333 = 2*P33*P34^2 - P33*P23 + 2*P33*l4*P34 + 2*P33^2*P44 - 4*P34*P24*P44 \
     + 2/3*P2444*P34 - 2*P24^2 + 2/3*P1444 + 4*P44*P14",
    "P344*P244 = P33*P23 + 2/3*P2444*P34 + 2*P24^2 - 2/3*P1444 + 4*P44*P14",
    "P444*P234 = 4*P34*P24*P44 - 1/3*P2444*P34 - 2*P33*P23 + 4*l4*P24*P44 - 1/3*l4*P2444 \
     - 2*P33*l3 + 4*P44*P14 + 2*P23*P44^2 - 2*P22*P44",
    "P344*P234 = 2*P14*l4 + 2*P44*P33*P24 + 2*P34*P23*P44 + 2*P44*P13 + 2*P14*P34 \
     + 2*P24*P34^2 + 2*P34*l4*P24 - 1/3*P33*P2444",
    "P444*P233 = 6*P44*P34*l3 - 2*P44*l2 + 4*P34*P23*P44 - 4*P34*l4*P24 - 2*P24*P34^2 \
     - 2*P14*P34 + P34*P22 - 2*P44*P13 - 2*P44*P33*P24 + l4*P22 - 2*l4*P23*P44 \
     + 2/3*P33*P2444 + 6*P24*P23 - 2*P24*l4^2 + 6*P24*l3 - 2*P14*l4",
    "P334*P244 = 2*P34*l4*P24 + 2*P24*P34^2 + 2*P14*P34 - 2*P34*P22 + 2*P12 - 2*P44*P13 \
     - 2*P44*P33*P24 + 2/3*P33*P2444 - P24*P23 - 2*P14*l4",
    "P334*P333 = 6*P14*P34 - 2*P34*P22 - 2*P12 - 2*P44*P13 + 4*P44*P33*P24 - 2/3*P33*P2444 \
     + P24*P23 + 2*P14*l4 + 4*P34*P33^2",
    "P333^2 = 2*P2233 - 4*l4*l2 + 4*l1 - 8*P33*P22 - 4*P34*P13 - 6*P23*l3 - 4*P34*l2 \
     - 4*l4*P13 - 7*P23^2 + 16*P14*P33 + 4*P33^3",
    "P444*P144 = 2/3*P33*P22 + P34*P13 + 2/3*P44*P1444 + 4/3*P23^2 - 2*P33*P14 - 1/3*P2233 \
     + 1/3*l4*P13 + P23*l3 + 4/3*P34*l2 - 4/3*l1 + 2/3*l4*l2",
    "P244^2 = -4*P44*P24^2 - 4/3*P33*P22 - 5/3*P23^2 + 4/3*P24*P2444 + 2/3*P2233 \
     - 8/3*l4*P13 - 2*P23*l3 + 4/3*P34*l2 - 4/3*l1 - 4/3*l4*l2",
    "P244*P333 = -4/3*P24*P2444 + (8/3*P13 + 2*P34*P23)*l4 - 2/3*P2233 + 5/3*P23^2 \
     + 4/3*P33*P22 + 4*P34*P13 + 4*P34*P33*P24 - 2*P34^2*P23 - 4/3*P44*P1444 \
     + 8*P44*P24^2 + 2*P44*P33*P23 + 8*P14*P44^2 + 2*P23*l3 + 8/3*P34*l2 + 4/3*l1 \
     + 4/3*l4*l2 - 4*P34^2*l3",
    "P233*P344 = 2/3*P24*P2444 + 1/3*P2233 - 4/3*P23^2 - 5/3*P33*P22 - P23*l3 + 2/3*P34*l2 \
     + 2*P34^2*P23 - 4/3*P44*P1444 - 4*P44*P24^2 + 2*P44*P33*P23 + 2*P34^2*l3 \
     + (2*P33*P24 - 4/3*P13)*l4 + 8*P14*P44^2 + 4/3*l1 - 2/3*l4*l2",
    "P234*P334 = -1/3*P24*P2444 + 1/3*P2233 - 4/3*P23^2 - 2/3*P33*P22 + 2*P33*P14 - P23*l3 \
     + 2/3*P34*l2 - 4/3*l4*P13 + 2*P34*P33*P24 + 2*P34^2*P23 + 2/3*P44*P1444 \
     + 2*P44*P24^2 + 2*P34^2*l3 - 4*P14*P44^2 + 4/3*l1 - 2/3*l4*l2",
    "P224*P444 = -4/3*l1 - 1/3*l4*l2 + 2*P34*l4*P23 + l4*P34*l3 + 2*P44*P33*l3 \
     - 2*l4*P33*P24 + 2*P22*P44^2 + 2/3*P44*l4*P2444 - 4*l4*P24*P44^2 - 2/3*P23^2 \
     - 2*P33*P14 + 2*P34*P13 + 2/3*P44*P1444 - P34^2*l3 - 4*P14*P44^2 - 1/3*P2233 \
     + 6*P44*P24^2 + 2/3*P33*P22 - 2/3*P24*P2444 - 2/3*l4*P13 - P23*l3 + 7/3*P34*l2",
    "P144*P344 = 2/3*P1444*P34 + P13*P33 + 2*P14*P24",
];

/// The three right-hand sides combined into the four-index identity
/// `A·B − C² = 0`, where `P444² = A`, `P344² = B`, `P344·P444 = C`.
pub const QUAD_FOUR_INDEX: &str = "(4*P44^3 - 4*P44*P33 + P34^2 - 4*P23 + 2*l4*P34 + l4^2 - 4*l3) \
     * (4*P34^2*P44 + 4*P24*P34 + P33^2 + 4*P14) \
     - (4*P34*P44^2 + 6*P24*P44 - P33*P34 - P33*l4 - 2/3*P2444)^2 = 0";

const MISC: [(&str, &str); 10] = [
    ("early-4444", "Q4444 = -3*P33"),
    ("early-3444", "Q3444 = 3*P24"),
    ("early-2344", "Q2344 = -4*P14 + P22 - 2*l4*P24"),
    ("early-1344", "Q1344 = -P12 + 2*l4*P12"),
    ("early-444sq", "P444^2 = 4*P44^3 - 4*P44*P33 + P34^2 - 4*P23 + 2*l4*P34 + l4^2 - 4*l3"),
    ("early-344sq", "P344^2 = 4*P34^2*P44^2 + 4*P24*P34 + P33^2 + 4*P14"),
    ("q-ijkk", "Q1344 = P1344 - 2*P13*P44 - 4*P14*P34"),
    ("q-iikk", "Q2244 = P2244 - 2*P22*P44 - 4*P24^2"),
    ("q-ikkk", "Q3444 = P3444 - 6*P34*P44"),
    ("q-kkkk", "Q4444 = P4444 - 6*P44^2"),
];

fn q_label(lhs: &Expr) -> String {
    lhs.terms()
        .map(|(s, _)| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("*"))
        .collect::<Vec<_>>()
        .join("+")
}

/// All printed relations of a section, in listed order.
pub fn load_catalog(section: Section) -> Vec<RelationEntry> {
    let build = |texts: &[&str], prefix: &str| -> Vec<RelationEntry> {
        let mut seen: Vec<String> = Vec::new();
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let (l, _) = parse_relation(t).expect("catalog entry parses");
                let base = format!("{prefix}:{}", q_label(&l));
                let n = seen.iter().filter(|s| **s == base).count();
                seen.push(base.clone());
                let id = if n == 0 { base } else { format!("{base}#{}", n + 1) };
                RelationEntry::new(id, section, i + 1, t).expect("catalog entry parses")
            })
            .collect()
    };
    match section {
        Section::FourIndex => build(&FOUR_INDEX, "4i"),
        Section::ThreeIndexLinear => {
            let mut v = build(&THREE_INDEX_LINEAR, "3l");
            v[7] = v[7].clone().with_note("quadratic in three-index functions, listed among the linear ones");
            v
        }
        Section::ThreeIndexQuadratic => build(&THREE_INDEX_QUADRATIC, "3q"),
        Section::QuadFourIndex => vec![RelationEntry::new("q4i:product", section, 1, QUAD_FOUR_INDEX)
            .expect("catalog entry parses")
            .with_note("eliminates the three-index functions from the first three quadratic relations")],
        Section::Misc => MISC
            .iter()
            .enumerate()
            .map(|(i, (id, t))| {
                RelationEntry::new(format!("misc:{id}"), section, i + 1, t).expect("catalog entry parses")
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_sizes() {
        assert_eq!(load_catalog(Section::FourIndex).len(), 20);
        assert_eq!(load_catalog(Section::ThreeIndexLinear).len(), 10);
        assert_eq!(load_catalog(Section::ThreeIndexQuadratic).len(), 23);
    }

    #[test]
    fn four_index_screen() {
        let cat = load_catalog(Section::FourIndex);
        assert_eq!(cat[0].id, "4i:Q4444");
        let bad: Vec<&RelationEntry> = cat.iter().filter(|e| !e.screen.is_consistent()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].id, "4i:Q1223");
        match &bad[0].screen {
            WeightScreen::Inconsistent { lhs, rhs, suggestions } => {
                assert_eq!(lhs, &vec![-17]);
                assert_eq!(rhs, &vec![-15]);
                assert!(suggestions.iter().any(|s| s.starts_with("Q1233 =")), "{suggestions:?}");
            }
            _ => unreachable!(),
        }
        assert_eq!(cat[18].id, "4i:Q1223#2");
        assert!(cat[18].screen.is_consistent());
    }

    #[test]
    fn quadratic_sections_are_homogeneous() {
        for s in [Section::ThreeIndexLinear, Section::ThreeIndexQuadratic, Section::QuadFourIndex] {
            for e in load_catalog(s) {
                assert!(e.screen.is_consistent(), "{} {:?}", e.id, e.screen);
            }
        }
        let q = &load_catalog(Section::ThreeIndexQuadratic)[0];
        assert_eq!(q.screen, WeightScreen::Consistent { weight: -6 });
    }

    #[test]
    fn misc_variants_are_flagged_and_repaired() {
        let cat = load_catalog(Section::Misc);
        let q1344 = cat.iter().find(|e| e.id == "misc:early-1344").unwrap();
        match &q1344.screen {
            WeightScreen::Inconsistent { suggestions, .. } => {
                let want = parse_relation("Q1344 = -P12 + 2*l4*P14").unwrap();
                assert!(suggestions.iter().any(|s| parse_relation(s).unwrap() == want), "{suggestions:?}");
            }
            _ => panic!("expected inconsistent"),
        }
        let sq = cat.iter().find(|e| e.id == "misc:early-344sq").unwrap();
        match &sq.screen {
            WeightScreen::Inconsistent { suggestions, .. } => {
                let want = parse_relation("P344^2 = 4*P34^2*P44 + 4*P24*P34 + P33^2 + 4*P14").unwrap();
                assert!(suggestions.iter().any(|s| parse_relation(s).unwrap() == want), "{suggestions:?}");
            }
            _ => panic!("expected inconsistent"),
        }
    }

    #[test]
    fn section_names_round_trip() {
        for s in Section::ALL {
            assert_eq!(s.name().parse::<Section>().unwrap(), s);
        }
    }
}
