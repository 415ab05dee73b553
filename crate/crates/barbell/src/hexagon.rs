//! The quotient engine for `Lambda_m`: Hexagon relation generators,
//! window-bounded zero certification with explicit witnesses, sound nonzero
//! certification via slice functionals and substitution pipelines, and
//! annihilation audits for every functional used in a certificate.
//!
//! Verdicts are three-valued. A window search that finds no witness proves
//! nothing, so the only sound outcomes are `Zero` (witness re-evaluates to
//! the input) and `Nonzero` (an audited functional evaluates nonzero);
//! everything else stays `Inconclusive`.
//!
//! The relation span used throughout is generated by the merged hexagon form
//! below. Whether the full m=2 relation module coincides with that span is
//! not known; all certificates are sound for the quotient by the span, and a
//! larger relation set could only turn Nonzero verdicts inconclusive, never
//! invalidate a Zero.

use crate::exactla::{solve_membership, SparseVec};
use crate::freeword::Gen;
use crate::groupalg::{
    abelianize, kill_t, kill_u, Monomial, MonomialM1, MonomialM2, Poly, PolyM1, PolyM2, Rational,
    SlotWord,
};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// One m=1 Hexagon relation generator, indexed by integers (alpha, beta).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RelationGenM1 {
    pub alpha: i64,
    pub beta: i64,
}

/// One m=2 Hexagon relation generator, indexed by a pair of slot words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelationGenM2 {
    pub nu: SlotWord,
    pub mu: SlotWord,
}

/// `t1^(a-b) t3^(-b) + t1^b t3^(b-a) - t1^a t3^(a-b) - t1^(b-a) t3^(-a)`.
pub fn hexagon_m1(alpha: i64, beta: i64) -> PolyM1 {
    let one = Rational::one;
    let mut p = PolyM1::zero();
    p.add_term(MonomialM1::new(alpha - beta, -beta), one());
    p.add_term(MonomialM1::new(beta, beta - alpha), one());
    p.add_term(MonomialM1::new(alpha, alpha - beta), -one());
    p.add_term(MonomialM1::new(beta - alpha, -alpha), -one());
    p
}

/// Rearranged m=2 relation: `(nu|mu) + (mu^-1|nu^-1) - (nu^-1|mu nu^-1)
/// - (nu mu^-1|nu)`, slotwise reduced.
pub fn hexagon_m2(nu: &SlotWord, mu: &SlotWord) -> PolyM2 {
    let one = Rational::one;
    let nubar = nu.invert();
    let mubar = mu.invert();
    let mut p = PolyM2::zero();
    p.add_term(MonomialM2::new(nu.clone(), mu.clone()), one());
    p.add_term(MonomialM2::new(mubar.clone(), nubar.clone()), one());
    p.add_term(MonomialM2::new(nubar.clone(), mu.mul(&nubar)), -one());
    p.add_term(MonomialM2::new(nu.mul(&mubar), nu.clone()), -one());
    p
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("degenerate slice: 2a = c (the paired class is 2-torsion, the functional vanishes identically over Q)")]
    DegenerateSlice,
}

/// The slice functional `phi_{c,a}(p) = coeff(t1^a t3^(a-c)) -
/// coeff(t1^(c-a) t3^(-a))`, defined when `2a != c`. It annihilates every
/// Hexagon generator, hence descends to the quotient.
pub fn slice_functional_m1(c: i64, a: i64, p: &PolyM1) -> Result<Rational, SliceError> {
    if 2 * a == c {
        return Err(SliceError::DegenerateSlice);
    }
    Ok(p.coeff(&MonomialM1::new(a, a - c)) - p.coeff(&MonomialM1::new(c - a, -a)))
}

/// Substitution pipelines that precede an m=1 slice functional when the input
/// lives in the m=2 algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KillMap {
    /// u -> 1; the slice then reads t-exponents.
    KillU,
    /// t -> 1; the slice then reads u-exponents.
    KillT,
}

/// A functional descriptor usable in certificates (and in audits).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Functional {
    /// Direct slice on an m=1 polynomial.
    SliceM1 { c: i64, a: i64 },
    /// Substitution pipeline followed by a slice, for m=2 polynomials.
    Composite { kill: KillMap, c: i64, a: i64 },
    /// Coefficient readout after slotwise abelianization. Diagnostic only;
    /// fails the annihilation audit and is never used in certificates.
    AbelianizedCoeff { key: String },
}

impl Functional {
    pub fn eval_m1(&self, p: &PolyM1) -> Result<Rational, SliceError> {
        match self {
            Functional::SliceM1 { c, a } => slice_functional_m1(*c, *a, p),
            _ => panic!("functional {self:?} does not apply to m=1 polynomials"),
        }
    }

    pub fn eval_m2(&self, p: &PolyM2) -> Result<Rational, SliceError> {
        match self {
            Functional::Composite { kill, c, a } => {
                let image = match kill {
                    KillMap::KillU => kill_u(p),
                    KillMap::KillT => kill_t(p),
                };
                slice_functional_m1(*c, *a, &image)
            }
            Functional::AbelianizedCoeff { key } => {
                let ab = abelianize(p);
                let m = MonomialM2::parse_key(key).expect("stored key parses");
                Ok(ab.coeff(&m))
            }
            Functional::SliceM1 { .. } => panic!("m=1 slice does not apply to m=2 polynomials"),
        }
    }
}

/// Window descriptor recorded in verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Window {
    M1 {
        p_min: i64,
        p_max: i64,
        q_min: i64,
        q_max: i64,
        margin: i64,
        generators: usize,
    },
    M2 {
        length_bound: u64,
        slot_len_cap: u64,
        generators: usize,
    },
    /// The search was skipped: an annihilating functional evaluates nonzero
    /// on the input, so no window can contain a witness.
    Obstructed {
        functional: Functional,
    },
    Empty,
}

/// Quotient decision for one polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<G> {
    Zero {
        witness: Vec<(G, Rational)>,
        window: Window,
    },
    Nonzero {
        functional: Functional,
        value: Rational,
    },
    Inconclusive {
        window: Window,
    },
}

impl<G> Verdict<G> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::Zero { .. })
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, Verdict::Nonzero { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("window overflow: {generators} relation generators exceed the cap {cap}")]
    WindowOverflow { generators: usize, cap: usize },
}

/// Tuning knobs for the window searches. Defaults follow the documented
/// margins: m=1 margin 2*(max exponent) with doubling escalation capped at 64
/// columns per axis; m=2 length bound = support max slot length + 2.
#[derive(Debug, Clone, Copy)]
pub struct QuotientConfig {
    pub max_margin: Option<i64>,
    pub axis_cap: i64,
    pub generator_cap: usize,
    pub length_bound: Option<u64>,
}

impl Default for QuotientConfig {
    fn default() -> Self {
        QuotientConfig {
            max_margin: None,
            axis_cap: 64,
            generator_cap: 40_000,
            length_bound: None,
        }
    }
}

fn poly_to_vec<M: Monomial>(p: &Poly<M>, index: &BTreeMap<M, usize>) -> Option<SparseVec> {
    let mut v = SparseVec::new();
    for (m, c) in p.terms() {
        v.add_entry(*index.get(m)?, c.clone());
    }
    Some(v)
}

fn support_box(p: &PolyM1) -> (i64, i64, i64, i64) {
    let mut p_min = i64::MAX;
    let mut p_max = i64::MIN;
    let mut q_min = i64::MAX;
    let mut q_max = i64::MIN;
    for (m, _) in p.terms() {
        p_min = p_min.min(m.p);
        p_max = p_max.max(m.p);
        q_min = q_min.min(m.q);
        q_max = q_max.max(m.q);
    }
    (p_min, p_max, q_min, q_max)
}

/// Enumerates all m=1 generators whose four monomials lie inside the box.
pub fn m1_window_generators(
    p_min: i64,
    p_max: i64,
    q_min: i64,
    q_max: i64,
) -> Vec<(RelationGenM1, PolyM1)> {
    let mut out = Vec::new();
    let in_box = |m: &MonomialM1| m.p >= p_min && m.p <= p_max && m.q >= q_min && m.q <= q_max;
    // alpha and beta both occur as t1-exponents of generator monomials
    for alpha in p_min..=p_max {
        for beta in p_min..=p_max {
            if alpha == beta {
                continue;
            }
            let g = hexagon_m1(alpha, beta);
            if !g.is_zero() && g.terms().all(|(m, _)| in_box(m)) {
                out.push((RelationGenM1 { alpha, beta }, g));
            }
        }
    }
    out
}

/// Window-bounded zero test for m=1. Margins escalate 0, 1, 2, 4, ... up to
/// the configured maximum, so a Zero found at a small window is returned
/// unchanged at any larger requested margin (monotonicity by construction).
pub fn check_zero_m1(
    p: &PolyM1,
    config: &QuotientConfig,
) -> Result<Verdict<RelationGenM1>, QuotientError> {
    if p.is_zero() {
        return Ok(Verdict::Zero {
            witness: Vec::new(),
            window: Window::Empty,
        });
    }
    // slice obstruction: these functionals annihilate every generator, so a
    // nonzero value rules out membership at any margin
    for (c, a) in slice_candidates(p) {
        if !slice_functional_m1(c, a, p)
            .expect("candidates are nondegenerate")
            .is_zero()
        {
            return Ok(Verdict::Inconclusive {
                window: Window::Obstructed {
                    functional: Functional::SliceM1 { c, a },
                },
            });
        }
    }
    let (p_min, p_max, q_min, q_max) = support_box(p);
    let max_exp = p_min
        .abs()
        .max(p_max.abs())
        .max(q_min.abs())
        .max(q_max.abs());
    let max_margin = config.max_margin.unwrap_or_else(|| (2 * max_exp).max(2));
    let mut margins = vec![0];
    let mut m = 1;
    while m < max_margin {
        margins.push(m);
        m *= 2;
    }
    margins.push(max_margin);

    let mut last_window = Window::Empty;
    let mut any_window = false;
    for margin in margins {
        if (p_max - p_min) + 2 * margin + 1 > config.axis_cap
            || (q_max - q_min) + 2 * margin + 1 > config.axis_cap
        {
            break;
        }
        let (lo_p, hi_p) = (p_min - margin, p_max + margin);
        let (lo_q, hi_q) = (q_min - margin, q_max + margin);
        let gens = m1_window_generators(lo_p, hi_p, lo_q, hi_q);
        if gens.len() > config.generator_cap {
            return Err(QuotientError::WindowOverflow {
                generators: gens.len(),
                cap: config.generator_cap,
            });
        }
        let window = Window::M1 {
            p_min: lo_p,
            p_max: hi_p,
            q_min: lo_q,
            q_max: hi_q,
            margin,
            generators: gens.len(),
        };
        let mut index: BTreeMap<MonomialM1, usize> = BTreeMap::new();
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(*m).or_insert(next);
        }
        for (_, g) in &gens {
            for (m, _) in g.terms() {
                let next = index.len();
                index.entry(*m).or_insert(next);
            }
        }
        let target = poly_to_vec(p, &index).expect("own support indexed");
        let cols: Vec<SparseVec> = gens
            .iter()
            .map(|(_, g)| poly_to_vec(g, &index).expect("generator support indexed"))
            .collect();
        if let Some(coeffs) = solve_membership(&target, &cols) {
            let witness: Vec<(RelationGenM1, Rational)> = gens
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|((g, _), c)| (*g, c))
                .collect();
            return Ok(Verdict::Zero { witness, window });
        }
        last_window = window;
        any_window = true;
    }
    if !any_window {
        return Err(QuotientError::WindowOverflow {
            generators: 0,
            cap: config.generator_cap,
        });
    }
    Ok(Verdict::Inconclusive {
        window: last_window,
    })
}

/// All freely reduced words over {t, u} with letter length <= `len`, ordered
/// by length then lexicographically.
pub fn slot_words_up_to(len: u64) -> Vec<SlotWord> {
    let letters = [(Gen::T, 1i64), (Gen::T, -1), (Gen::U, 1), (Gen::U, -1)];
    let mut by_len: Vec<Vec<SlotWord>> = vec![vec![SlotWord::identity()]];
    for l in 1..=len {
        let mut next = Vec::new();
        for w in &by_len[(l - 1) as usize] {
            for (g, e) in letters {
                let cand = w.mul(&SlotWord::generator(g, e).expect("t/u generator"));
                if cand.letter_len() == l {
                    next.push(cand);
                }
            }
        }
        next.sort();
        next.dedup();
        by_len.push(next);
    }
    let mut out = Vec::new();
    for mut level in by_len {
        level.sort();
        out.append(&mut level);
    }
    out
}

fn m2_support_max_len(p: &PolyM2) -> u64 {
    p.terms()
        .map(|(m, _)| m.nu.letter_len().max(m.mu.letter_len()))
        .max()
        .unwrap_or(0)
}

/// Enumerates m=2 generators indexed by word pairs of length <= `length_bound`
/// whose monomials keep slot lengths within `slot_cap`.
pub fn m2_window_generators(length_bound: u64, slot_cap: u64) -> Vec<(RelationGenM2, PolyM2)> {
    let words = slot_words_up_to(length_bound);
    let mut out = Vec::new();
    for nu in &words {
        for mu in &words {
            let g = hexagon_m2(nu, mu);
            if g.is_zero() {
                continue;
            }
            if g.terms()
                .all(|(m, _)| m.nu.letter_len() <= slot_cap && m.mu.letter_len() <= slot_cap)
            {
                out.push((
                    RelationGenM2 {
                        nu: nu.clone(),
                        mu: mu.clone(),
                    },
                    g,
                ));
            }
        }
    }
    out
}

/// Window-bounded zero test for m=2, with word length escalating to the
/// configured bound. The generator cap bounds the search; exceeding it stops
/// escalation rather than faking a verdict.
pub fn check_zero_m2(
    p: &PolyM2,
    config: &QuotientConfig,
) -> Result<Verdict<RelationGenM2>, QuotientError> {
    if p.is_zero() {
        return Ok(Verdict::Zero {
            witness: Vec::new(),
            window: Window::Empty,
        });
    }
    // pipeline obstruction: kill maps send generators to generators, so a
    // nonzero slice of either image rules out membership
    for kill in [KillMap::KillT, KillMap::KillU] {
        let image = match kill {
            KillMap::KillU => kill_u(p),
            KillMap::KillT => kill_t(p),
        };
        for (c, a) in slice_candidates(&image) {
            if !slice_functional_m1(c, a, &image)
                .expect("candidates are nondegenerate")
                .is_zero()
            {
                return Ok(Verdict::Inconclusive {
                    window: Window::Obstructed {
                        functional: Functional::Composite { kill, c, a },
                    },
                });
            }
        }
    }
    let support_len = m2_support_max_len(p);
    let max_bound = config.length_bound.unwrap_or(support_len + 2);
    let slot_cap = support_len + 2;
    let mut last_window = Window::Empty;
    let mut any_window = false;
    for bound in 1..=max_bound {
        // reduced words over two generators grow as 4*3^(l-1) per length;
        // stop before enumerating a pair grid beyond the cap
        let word_count: u64 = (1..=bound).fold(1u64, |acc, l| {
            acc.saturating_add(4u64.saturating_mul(3u64.saturating_pow(l.saturating_sub(1) as u32)))
        });
        if word_count.saturating_mul(word_count) > config.generator_cap as u64 {
            break;
        }
        let gens = m2_window_generators(bound, slot_cap);
        if gens.len() > config.generator_cap {
            break;
        }
        any_window = true;
        let window = Window::M2 {
            length_bound: bound,
            slot_len_cap: slot_cap,
            generators: gens.len(),
        };
        let mut index: BTreeMap<MonomialM2, usize> = BTreeMap::new();
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
        for (_, g) in &gens {
            for (m, _) in g.terms() {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            }
        }
        let target = poly_to_vec(p, &index).expect("own support indexed");
        let cols: Vec<SparseVec> = gens
            .iter()
            .map(|(_, g)| poly_to_vec(g, &index).expect("generator support indexed"))
            .collect();
        if let Some(coeffs) = solve_membership(&target, &cols) {
            let witness: Vec<(RelationGenM2, Rational)> = gens
                .into_iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|((g, _), c)| (g, c))
                .collect();
            return Ok(Verdict::Zero { witness, window });
        }
        last_window = window;
    }
    if !any_window {
        return Err(QuotientError::WindowOverflow {
            generators: 0,
            cap: config.generator_cap,
        });
    }
    Ok(Verdict::Inconclusive {
        window: last_window,
    })
}

/// Candidate slice parameters touching the support of `p`, in the canonical
/// representative convention `a <= c - a`, ordered by descending slice class.
pub fn slice_candidates(p: &PolyM1) -> Vec<(i64, i64)> {
    let mut cands = Vec::new();
    for (m, _) in p.terms() {
        let c = m.p - m.q;
        for a in [m.p, -m.q] {
            if 2 * a != c {
                cands.push((c, a.min(c - a)));
            }
        }
    }
    cands.sort_by_key(|&(c, a)| (-c, a));
    cands.dedup();
    cands
}

/// Searches audited functionals for a nonzero evaluation on an m=1
/// polynomial. Returns `Nonzero` on the first hit, else `Inconclusive`.
pub fn certify_nonzero_m1(p: &PolyM1) -> Verdict<RelationGenM1> {
    for (c, a) in slice_candidates(p) {
        let value = slice_functional_m1(c, a, p).expect("candidates exclude degenerate slices");
        if !value.is_zero() {
            return Verdict::Nonzero {
                functional: Functional::SliceM1 { c, a },
                value,
            };
        }
    }
    Verdict::Inconclusive {
        window: Window::Empty,
    }
}

/// m=2 nonzero certification: composes kill_t / kill_u with m=1 slices. Sound
/// because both substitutions map relation generators to relation generators
/// (see the annihilation audit).
pub fn certify_nonzero_m2(p: &PolyM2) -> Verdict<RelationGenM2> {
    for kill in [KillMap::KillT, KillMap::KillU] {
        let image = match kill {
            KillMap::KillU => kill_u(p),
            KillMap::KillT => kill_t(p),
        };
        for (c, a) in slice_candidates(&image) {
            let value =
                slice_functional_m1(c, a, &image).expect("candidates exclude degenerate slices");
            if !value.is_zero() {
                return Verdict::Nonzero {
                    functional: Functional::Composite { kill, c, a },
                    value,
                };
            }
        }
    }
    Verdict::Inconclusive {
        window: Window::Empty,
    }
}

/// One annihilation failure: the functional evaluated nonzero on a relation
/// generator, so it does not descend to the quotient.
#[derive(Debug, Clone, Serialize)]
pub struct AuditFailure {
    pub generator: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub functional: Functional,
    pub bound: u64,
    pub checked: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the functional on every relation generator within the bound
/// (m=1: |alpha|, |beta| <= bound; m=2: word lengths <= bound) and reports
/// any nonzero hit. m=2 audits enumerate word pairs, so their cost grows as
/// 9^bound; pipeline certificates use bound 3.
pub fn annihilation_audit(functional: &Functional, bound: u64) -> AuditReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    match functional {
        Functional::SliceM1 { .. } => {
            let b = bound as i64;
            for alpha in -b..=b {
                for beta in -b..=b {
                    let g = hexagon_m1(alpha, beta);
                    if g.is_zero() {
                        continue;
                    }
                    checked += 1;
                    let v = functional
                        .eval_m1(&g)
                        .expect("audited slices are nondegenerate");
                    if !v.is_zero() {
                        failures.push(AuditFailure {
                            generator: format!("hexagon_m1({alpha}, {beta})"),
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
        Functional::Composite { .. } | Functional::AbelianizedCoeff { .. } => {
            let words = slot_words_up_to(bound);
            for nu in &words {
                for mu in &words {
                    let g = hexagon_m2(nu, mu);
                    if g.is_zero() {
                        continue;
                    }
                    checked += 1;
                    let v = functional
                        .eval_m2(&g)
                        .expect("audited pipelines are nondegenerate");
                    if !v.is_zero() {
                        failures.push(AuditFailure {
                            generator: format!("hexagon_m2({nu}, {mu})"),
                            value: v.to_string(),
                        });
                    }
                }
            }
        }
    }
    AuditReport {
        functional: functional.clone(),
        bound,
        checked,
        failures,
    }
}

/// Serializes a verdict as `{"verdict": ..., "witness": ..., "window": ...}`.
pub fn verdict_to_json<G: std::fmt::Debug>(
    v: &Verdict<G>,
    gen_label: impl Fn(&G) -> String,
) -> serde_json::Value {
    match v {
        Verdict::Zero { witness, window } => serde_json::json!({
            "verdict": "zero",
            "witness": witness
                .iter()
                .map(|(g, c)| serde_json::json!({"generator": gen_label(g), "coefficient": c.to_string()}))
                .collect::<Vec<_>>(),
            "window": serde_json::to_value(window).unwrap(),
        }),
        Verdict::Nonzero { functional, value } => serde_json::json!({
            "verdict": "nonzero",
            "witness": {
                "functional": serde_json::to_value(functional).unwrap(),
                "value": value.to_string(),
            },
        }),
        Verdict::Inconclusive { window } => serde_json::json!({
            "verdict": "inconclusive",
            "window": serde_json::to_value(window).unwrap(),
        }),
    }
}

pub fn gen_label_m1(g: &RelationGenM1) -> String {
    format!("hexagon_m1({}, {})", g.alpha, g.beta)
}

pub fn gen_label_m2(g: &RelationGenM2) -> String {
    format!("hexagon_m2({}, {})", g.nu, g.mu)
}

/// Re-evaluates a Zero witness and checks it reproduces the input exactly.
pub fn verify_witness_m1(p: &PolyM1, witness: &[(RelationGenM1, Rational)]) -> bool {
    let mut acc = PolyM1::zero();
    for (g, c) in witness {
        acc = acc.add(&hexagon_m1(g.alpha, g.beta).scale(c));
    }
    acc == *p
}

pub fn verify_witness_m2(p: &PolyM2, witness: &[(RelationGenM2, Rational)]) -> bool {
    let mut acc = PolyM2::zero();
    for (g, c) in witness {
        acc = acc.add(&hexagon_m2(&g.nu, &g.mu).scale(c));
    }
    acc == *p
}
