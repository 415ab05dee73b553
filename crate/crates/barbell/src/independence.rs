//! Certified linear-independence testing for finite families of invariant
//! values, reproducing the infinite-family statements at finite truncation.
//!
//! Independence is only ever asserted through audited functionals: the
//! evaluation matrix of sound functionals factors through the quotient, so
//! full rank there is a proof. Window non-membership is never treated as
//! one, so a failed search stays `Inconclusive`.

use crate::exactla::{SparseMatrix, SparseVec};
use crate::freeword::{parse_word, BarbellWord, ThetaSpec};
use crate::groupalg::{kill_t, kill_u, Monomial, PolyM1, PolyM2, Rational};
use crate::hexagon::{
    annihilation_audit, m1_window_generators, m2_window_generators, slice_functional_m1,
    Functional, KillMap,
};
use crate::w3::{w3_m1, w3_m2, Convention, W3Value};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy)]
pub struct IndependenceConfig {
    /// Window margin for the dependence search (defaults to the check_zero
    /// default on the stacked support).
    pub margin: i64,
    /// Annihilation audit bound for certificate functionals.
    pub audit_bound: u64,
    /// m=2 relation-generator word length for the dependence search.
    pub m2_length_bound: u64,
}

impl Default for IndependenceConfig {
    fn default() -> Self {
        IndependenceConfig {
            margin: 2,
            audit_bound: 20,
            m2_length_bound: 2,
        }
    }
}

/// A full-rank audited-functional evaluation matrix.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceCertificate {
    pub functionals: Vec<Functional>,
    /// rows = family members, columns = functionals; exact rational entries
    /// rendered as strings.
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub audit_bound: u64,
}

#[derive(Debug, Clone)]
pub enum IndependenceVerdict {
    Independent(IndependenceCertificate),
    /// A nontrivial rational combination of the family lies in the window
    /// relation span.
    Dependent {
        combination: Vec<Rational>,
    },
    Inconclusive {
        reason: String,
    },
}

impl IndependenceVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceVerdict::Independent(_))
    }
}

pub fn verdict_to_json(v: &IndependenceVerdict) -> serde_json::Value {
    match v {
        IndependenceVerdict::Independent(cert) => serde_json::json!({
            "verdict": "independent",
            "certificate": serde_json::to_value(cert).unwrap(),
        }),
        IndependenceVerdict::Dependent { combination } => serde_json::json!({
            "verdict": "dependent",
            "combination": combination.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        IndependenceVerdict::Inconclusive { reason } => serde_json::json!({
            "verdict": "inconclusive",
            "reason": reason,
        }),
    }
}

fn dependence_search<M: Monomial>(
    family: &[crate::groupalg::Poly<M>],
    relations: &[crate::groupalg::Poly<M>],
) -> Option<Vec<Rational>> {
    let mut index: BTreeMap<M, usize> = BTreeMap::new();
    let mut vec_of = |p: &crate::groupalg::Poly<M>| {
        let mut v = SparseVec::new();
        for (m, c) in p.terms() {
            let next = index.len();
            let ix = *index.entry(m.clone()).or_insert(next);
            v.add_entry(ix, c.clone());
        }
        v
    };
    let mut rows: Vec<SparseVec> = family.iter().map(&mut vec_of).collect();
    rows.extend(relations.iter().map(&mut vec_of));
    let ns = SparseMatrix::from_rows(rows).nullspace();
    for combo in ns {
        if combo[..family.len()].iter().any(|c| !c.is_zero()) {
            return Some(combo[..family.len()].to_vec());
        }
    }
    None
}

/// Greedy functional selection aiming at a triangular matrix: for each member
/// pick a functional that vanishes on all earlier members.
fn select_functionals<F>(n: usize, candidates: &[Functional], eval: F) -> Option<Vec<Functional>>
where
    F: Fn(&Functional, usize) -> Rational,
{
    let mut chosen = Vec::with_capacity(n);
    for target in 0..n {
        let pick = candidates.iter().find(|f| {
            !eval(f, target).is_zero() && (0..target).all(|prev| eval(f, prev).is_zero())
        });
        match pick {
            Some(f) => chosen.push(f.clone()),
            None => {
                // fall back to any functional separating the target
                let f = candidates.iter().find(|f| !eval(f, target).is_zero())?;
                chosen.push(f.clone());
            }
        }
    }
    Some(chosen)
}

fn certificate_from<F>(
    n: usize,
    functionals: Vec<Functional>,
    audit_bound: u64,
    eval: F,
) -> Option<IndependenceCertificate>
where
    F: Fn(&Functional, usize) -> Rational,
{
    for f in &functionals {
        if !annihilation_audit(f, audit_bound).passed() {
            return None;
        }
    }
    let entries: Vec<Vec<Rational>> = (0..n)
        .map(|r| functionals.iter().map(|f| eval(f, r)).collect())
        .collect();
    let rows: Vec<SparseVec> = entries
        .iter()
        .map(|row| SparseVec::from_entries(row.iter().cloned().enumerate()))
        .collect();
    let rank = SparseMatrix::from_rows(rows).rank();
    if rank != n {
        return None;
    }
    Some(IndependenceCertificate {
        functionals,
        matrix: entries
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect(),
        rank,
        audit_bound,
    })
}

/// Independence decision for m=1 values.
pub fn independent_m1(family: &[PolyM1], config: &IndependenceConfig) -> IndependenceVerdict {
    assert!(!family.is_empty(), "family must be nonempty");
    // window dependence search over the stacked support box
    let (mut p_min, mut p_max, mut q_min, mut q_max) = (0i64, 0i64, 0i64, 0i64);
    for p in family {
        for (m, _) in p.terms() {
            p_min = p_min.min(m.p);
            p_max = p_max.max(m.p);
            q_min = q_min.min(m.q);
            q_max = q_max.max(m.q);
        }
    }
    let margin = config.margin;
    let gens: Vec<PolyM1> = m1_window_generators(
        p_min - margin,
        p_max + margin,
        q_min - margin,
        q_max + margin,
    )
    .into_iter()
    .map(|(_, g)| g)
    .collect();
    if let Some(combination) = dependence_search(family, &gens) {
        return IndependenceVerdict::Dependent { combination };
    }

    let mut candidates = Vec::new();
    for p in family {
        for (c, a) in crate::hexagon::slice_candidates(p) {
            candidates.push(Functional::SliceM1 { c, a });
        }
    }
    candidates.sort_by_key(|f| match f {
        Functional::SliceM1 { c, a } => (-c, *a),
        _ => (0, 0),
    });
    candidates.dedup();
    let eval = |f: &Functional, ix: usize| match f {
        Functional::SliceM1 { c, a } => slice_functional_m1(*c, *a, &family[ix]).unwrap(),
        _ => unreachable!(),
    };
    let Some(chosen) = select_functionals(family.len(), &candidates, eval) else {
        return IndependenceVerdict::Inconclusive {
            reason: "no audited functional separates some family member".into(),
        };
    };
    match certificate_from(family.len(), chosen, config.audit_bound, eval) {
        Some(cert) => IndependenceVerdict::Independent(cert),
        None => IndependenceVerdict::Inconclusive {
            reason: "functional evaluation matrix is rank-deficient in the audited window".into(),
        },
    }
}

/// Independence decision for m=2 values via kill_t / kill_u pipelines.
pub fn independent_m2(family: &[PolyM2], config: &IndependenceConfig) -> IndependenceVerdict {
    assert!(!family.is_empty(), "family must be nonempty");
    let gens: Vec<PolyM2> = m2_window_generators(
        config.m2_length_bound,
        family
            .iter()
            .flat_map(|p| {
                p.terms()
                    .map(|(m, _)| m.nu.letter_len().max(m.mu.letter_len()))
            })
            .max()
            .unwrap_or(0)
            + 2,
    )
    .into_iter()
    .map(|(_, g)| g)
    .collect();
    if let Some(combination) = dependence_search(family, &gens) {
        return IndependenceVerdict::Dependent { combination };
    }

    let images: Vec<(KillMap, Vec<PolyM1>)> = vec![
        (KillMap::KillT, family.iter().map(kill_t).collect()),
        (KillMap::KillU, family.iter().map(kill_u).collect()),
    ];
    let mut candidates = Vec::new();
    for (kill, imgs) in &images {
        for img in imgs {
            for (c, a) in crate::hexagon::slice_candidates(img) {
                candidates.push(Functional::Composite { kill: *kill, c, a });
            }
        }
    }
    candidates.sort_by_key(|f| match f {
        Functional::Composite { kill, c, a } => (matches!(kill, KillMap::KillU), -c, *a),
        _ => (false, 0, 0),
    });
    candidates.dedup();
    let eval = |f: &Functional, ix: usize| match f {
        Functional::Composite { kill, c, a } => {
            let img = match kill {
                KillMap::KillT => &images[0].1[ix],
                KillMap::KillU => &images[1].1[ix],
            };
            slice_functional_m1(*c, *a, img).unwrap()
        }
        _ => unreachable!(),
    };
    let Some(chosen) = select_functionals(family.len(), &candidates, eval) else {
        return IndependenceVerdict::Inconclusive {
            reason: "no audited pipeline functional separates some family member".into(),
        };
    };
    // the m=2 pipeline audit bound: relation generators of word length <= 3
    let audit_bound = config.audit_bound.min(3);
    match certificate_from(family.len(), chosen, audit_bound, eval) {
        Some(cert) => IndependenceVerdict::Independent(cert),
        None => IndependenceVerdict::Inconclusive {
            reason: "pipeline evaluation matrix is rank-deficient in the audited window".into(),
        },
    }
}

/// Families named by a pattern over a k-range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyPattern {
    /// `delta_k = theta_k(e_{k-1}, e_{k-2})`.
    Delta,
    /// `theta_k(e_{k-a}, e_{k-b})`.
    ThetaOffsets { a: u32, b: u32 },
    /// `t B t R u^k` in the m=2 algebra.
    M2PowerU,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RangeViolation {
    #[error("k = {k} is out of range for pattern {pattern}: {why}")]
    BadK {
        pattern: String,
        k: u32,
        why: String,
    },
    #[error("unknown family pattern `{0}`")]
    UnknownPattern(String),
}

impl FamilyPattern {
    pub fn parse(text: &str) -> Result<FamilyPattern, RangeViolation> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("delta") {
            return Ok(FamilyPattern::Delta);
        }
        if t == "tBtRu^k" || t == "m2" {
            return Ok(FamilyPattern::M2PowerU);
        }
        if let Some(body) = t.strip_prefix("theta(").and_then(|s| s.strip_suffix(')')) {
            let parts: Vec<&str> = body.split(',').map(str::trim).collect();
            if parts.len() == 2 {
                let offset = |s: &str| -> Option<u32> { s.strip_prefix("k-")?.parse().ok() };
                if let (Some(a), Some(b)) = (offset(parts[0]), offset(parts[1])) {
                    return Ok(FamilyPattern::ThetaOffsets { a, b });
                }
            }
        }
        Err(RangeViolation::UnknownPattern(text.to_string()))
    }
}

impl std::fmt::Display for FamilyPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyPattern::Delta => write!(f, "delta"),
            FamilyPattern::ThetaOffsets { a, b } => write!(f, "theta(k-{a},k-{b})"),
            FamilyPattern::M2PowerU => write!(f, "tBtRu^k"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub label: String,
    pub word: BarbellWord,
    pub value: W3Value,
    /// Set when the pattern's natural slice certificate degenerates (2a = c).
    pub note: Option<String>,
}

/// Builds the named family over the (inclusive) k-range. An empty range gives
/// an empty list.
pub fn family_theta(
    pattern: &FamilyPattern,
    k_lo: u32,
    k_hi: u32,
) -> Result<Vec<FamilyMember>, RangeViolation> {
    let mut out = Vec::new();
    if k_lo > k_hi {
        return Ok(out);
    }
    for k in k_lo..=k_hi {
        out.push(family_member(pattern, k)?);
    }
    Ok(out)
}

fn family_member(pattern: &FamilyPattern, k: u32) -> Result<FamilyMember, RangeViolation> {
    let bad = |why: &str| RangeViolation::BadK {
        pattern: pattern.to_string(),
        k,
        why: why.into(),
    };
    match pattern {
        FamilyPattern::Delta => {
            if k < 4 {
                return Err(bad("delta_k needs k >= 4"));
            }
            let word = ThetaSpec::unit(k, k - 1, k - 2)
                .map_err(|e| bad(&e.to_string()))?
                .to_word();
            let value =
                W3Value::M1(w3_m1(&word, Convention::MainFormula).expect("theta words classify"));
            Ok(FamilyMember {
                label: format!("delta_{k}"),
                word,
                value,
                note: None,
            })
        }
        FamilyPattern::ThetaOffsets { a, b } => {
            if *a == 0 || *b == 0 || k <= *a.max(b) {
                return Err(bad("offsets must leave indices in 1..=k-1"));
            }
            let word = ThetaSpec::unit(k, k - a, k - b)
                .map_err(|e| bad(&e.to_string()))?
                .to_word();
            let value =
                W3Value::M1(w3_m1(&word, Convention::MainFormula).expect("theta words classify"));
            // natural slice for this pattern: c = k-a, a-param = b-a
            let (c, apar) = ((k - a) as i64, (*b as i64) - (*a as i64));
            let note = if 2 * apar == c {
                Some(format!("slice certificate degenerates: 2({apar}) = {c}"))
            } else {
                None
            };
            Ok(FamilyMember {
                label: format!("theta_{k}(e_{},e_{})", k - a, k - b),
                word,
                value,
                note,
            })
        }
        FamilyPattern::M2PowerU => {
            if k < 1 {
                return Err(bad("u-power must be >= 1"));
            }
            let word = parse_word(&format!("t B t R u^{k}"), 2).expect("fixed m=2 word parses");
            let value =
                W3Value::M2(w3_m2(&word, Convention::WordForm).expect("m=2 example classifies"));
            Ok(FamilyMember {
                label: format!("B(t vB t vR u^{k})"),
                word,
                value,
                note: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupalg::rat;

    #[test]
    fn trivially_dependent_pair() {
        let p = crate::w3::t_int(crate::w3::TType::T1, 2, 3);
        let family = vec![p.clone(), p.scale_int(2)];
        match independent_m1(&family, &IndependenceConfig::default()) {
            IndependenceVerdict::Dependent { combination } => {
                // combination (c1, c2) with c1 p + 2 c2 p in the span
                assert!(combination.iter().any(|c| !c.is_zero()));
                let c = combination[0].clone() + combination[1].clone() * rat(2);
                // both entries present; 2:-1 up to scale is the clean witness
                assert!(c.is_zero() || !combination[1].is_zero());
            }
            other => panic!("expected Dependent, got {other:?}"),
        }
    }

    #[test]
    fn delta_theta_family_is_independent() {
        let mut family = Vec::new();
        for member in family_theta(&FamilyPattern::Delta, 6, 12).unwrap() {
            match member.value {
                W3Value::M1(p) => family.push(p),
                _ => unreachable!(),
            }
        }
        for member in family_theta(&FamilyPattern::ThetaOffsets { a: 1, b: 3 }, 6, 12).unwrap() {
            match member.value {
                W3Value::M1(p) => family.push(p),
                _ => unreachable!(),
            }
        }
        let v = independent_m1(&family, &IndependenceConfig::default());
        match v {
            IndependenceVerdict::Independent(cert) => assert_eq!(cert.rank, 14),
            other => panic!("expected Independent, got {other:?}"),
        }
    }

    #[test]
    fn m2_family_is_independent() {
        let mut family = Vec::new();
        for member in family_theta(&FamilyPattern::M2PowerU, 1, 5).unwrap() {
            match member.value {
                W3Value::M2(p) => family.push(p),
                _ => unreachable!(),
            }
        }
        let v = independent_m2(&family, &IndependenceConfig::default());
        match v {
            IndependenceVerdict::Independent(cert) => {
                assert_eq!(cert.rank, 5);
                assert!(cert.functionals.iter().all(|f| matches!(
                    f,
                    Functional::Composite {
                        kill: KillMap::KillT,
                        ..
                    }
                )));
            }
            other => panic!("expected Independent, got {other:?}"),
        }
    }

    #[test]
    fn certificate_matrix_reevaluates() {
        let mut family = Vec::new();
        for member in family_theta(&FamilyPattern::Delta, 6, 9).unwrap() {
            match member.value {
                W3Value::M1(p) => family.push(p),
                _ => unreachable!(),
            }
        }
        let IndependenceVerdict::Independent(cert) =
            independent_m1(&family, &IndependenceConfig::default())
        else {
            panic!("expected Independent");
        };
        for (r, row) in cert.matrix.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                let Functional::SliceM1 { c: cc, a } = cert.functionals[c] else {
                    unreachable!()
                };
                let recomputed = slice_functional_m1(cc, a, &family[r]).unwrap();
                assert_eq!(&recomputed.to_string(), entry);
            }
        }
    }

    #[test]
    fn theta_pattern_degenerate_slice_flag() {
        // theta_k(e_{k-2}, e_{k-m}) with 2m = k+2 degenerates; e.g. k=6, m=4
        let fam = family_theta(&FamilyPattern::ThetaOffsets { a: 2, b: 4 }, 6, 6).unwrap();
        assert!(fam[0].note.is_some());
        let fam = family_theta(&FamilyPattern::ThetaOffsets { a: 2, b: 3 }, 6, 6).unwrap();
        assert!(fam[0].note.is_none());
    }

    #[test]
    fn empty_range_gives_empty_family() {
        let fam = family_theta(&FamilyPattern::Delta, 8, 7).unwrap();
        assert!(fam.is_empty());
    }

    #[test]
    fn pattern_parsing() {
        assert_eq!(FamilyPattern::parse("delta").unwrap(), FamilyPattern::Delta);
        assert_eq!(
            FamilyPattern::parse("theta(k-1,k-3)").unwrap(),
            FamilyPattern::ThetaOffsets { a: 1, b: 3 }
        );
        assert_eq!(
            FamilyPattern::parse("tBtRu^k").unwrap(),
            FamilyPattern::M2PowerU
        );
        assert!(FamilyPattern::parse("nope").is_err());
    }
}
