//! Exact-rational coefficient algebras over the two monomial bases: exponent
//! pairs `t1^p t3^q` for m=1 and pairs of reduced words in `<t, u>` for m=2.
//!
//! A polynomial here is a chosen lift of a class in the quotient `Lambda_m`;
//! coefficients are exact rationals throughout so that quotient membership
//! stays a rank question.

use crate::freeword::{parse_reduced, Gen, ReducedWord, WordError};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("bad monomial key `{0}`")]
    BadKey(String),
    #[error("bad rational literal `{0}`")]
    BadRational(String),
    #[error("word error in monomial key: {0}")]
    Word(#[from] WordError),
    #[error("slot word may only use t and u: `{0}`")]
    SlotGenerator(String),
}

/// A reduced word over `{t, u}` only, used in the two slots of an m=2
/// monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SlotWord(ReducedWord);

impl SlotWord {
    pub fn identity() -> Self {
        SlotWord(ReducedWord::identity())
    }

    pub fn new(word: ReducedWord) -> Result<Self, PolyError> {
        if word.syllables().iter().any(|(g, _)| g.is_cuff()) {
            return Err(PolyError::SlotGenerator(word.to_string()));
        }
        Ok(SlotWord(word))
    }

    pub fn parse(text: &str) -> Result<Self, PolyError> {
        if text.trim() == "1" {
            return Ok(SlotWord::identity());
        }
        SlotWord::new(parse_reduced(text)?)
    }

    pub fn generator(g: Gen, e: i64) -> Result<Self, PolyError> {
        SlotWord::new(ReducedWord::generator(g, e))
    }

    pub fn word(&self) -> &ReducedWord {
        &self.0
    }

    pub fn mul(&self, other: &SlotWord) -> SlotWord {
        SlotWord(self.0.concat(&other.0))
    }

    pub fn invert(&self) -> SlotWord {
        SlotWord(self.0.invert())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn letter_len(&self) -> u64 {
        self.0.letter_len()
    }

    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.0.exponent_sum(g)
    }
}

impl fmt::Display for SlotWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_identity() {
            write!(f, "1")
        } else {
            self.0.fmt(f)
        }
    }
}

/// Monomial basis element: multiplication plus a canonical string key.
pub trait Monomial: Clone + Ord + fmt::Display {
    fn identity() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn key(&self) -> String;
    fn parse_key(key: &str) -> Result<Self, PolyError>;
}

/// `t1^p t3^q` (m = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MonomialM1 {
    pub p: i64,
    pub q: i64,
}

impl MonomialM1 {
    pub fn new(p: i64, q: i64) -> Self {
        MonomialM1 { p, q }
    }

    pub fn invert(&self) -> Self {
        MonomialM1 {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl fmt::Display for MonomialM1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t1^{} t3^{}", self.p, self.q)
    }
}

impl Monomial for MonomialM1 {
    fn identity() -> Self {
        MonomialM1::new(0, 0)
    }

    fn mul(&self, other: &Self) -> Self {
        MonomialM1::new(self.p + other.p, self.q + other.q)
    }

    fn key(&self) -> String {
        self.to_string()
    }

    fn parse_key(key: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::BadKey(key.to_string());
        let mut parts = key.split_whitespace();
        let p = parts
            .next()
            .and_then(|s| s.strip_prefix("t1^"))
            .and_then(|s| s.parse().ok())
            .ok_or_else(bad)?;
        let q = parts
            .next()
            .and_then(|s| s.strip_prefix("t3^"))
            .and_then(|s| s.parse().ok())
            .ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(MonomialM1::new(p, q))
    }
}

/// `nu(t1, u1) . mu(t3, u3)` (m = 2): a pair of reduced slot words. Slot-1 and
/// slot-3 letters commute with each other but not within a slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MonomialM2 {
    pub nu: SlotWord,
    pub mu: SlotWord,
}

impl MonomialM2 {
    pub fn new(nu: SlotWord, mu: SlotWord) -> Self {
        MonomialM2 { nu, mu }
    }

    pub fn invert(&self) -> Self {
        MonomialM2 {
            nu: self.nu.invert(),
            mu: self.mu.invert(),
        }
    }
}

impl fmt::Display for MonomialM2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.nu, self.mu)
    }
}

impl Monomial for MonomialM2 {
    fn identity() -> Self {
        MonomialM2::default()
    }

    fn mul(&self, other: &Self) -> Self {
        MonomialM2::new(self.nu.mul(&other.nu), self.mu.mul(&other.mu))
    }

    fn key(&self) -> String {
        self.to_string()
    }

    fn parse_key(key: &str) -> Result<Self, PolyError> {
        let (nu, mu) = key
            .split_once('|')
            .ok_or_else(|| PolyError::BadKey(key.to_string()))?;
        Ok(MonomialM2::new(
            SlotWord::parse(nu.trim())?,
            SlotWord::parse(mu.trim())?,
        ))
    }
}

/// Sparse polynomial: a finite map monomial -> nonzero rational, iterated in
/// canonical (monomial-ordered) order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly<M: Monomial> {
    terms: BTreeMap<M, Rational>,
}

pub type PolyM1 = Poly<MonomialM1>;
pub type PolyM2 = Poly<MonomialM2>;

impl<M: Monomial> Poly<M> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::monomial(M::identity(), Rational::one())
    }

    pub fn monomial(m: M, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&M, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &M) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: M, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&rat(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Applies a monomial map, merging images.
    pub fn map_monomials<N: Monomial>(&self, f: impl Fn(&M) -> N) -> Poly<N> {
        let mut out = Poly::zero();
        for (m, c) in self.terms() {
            out.add_term(f(m), c.clone());
        }
        out
    }
}

impl<M: Monomial> fmt::Display for Poly<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{}", m)?;
            } else if a.is_integer() {
                write!(f, "{} {}", a.numer(), m)?;
            } else {
                write!(f, "{}/{} {}", a.numer(), a.denom(), m)?;
            }
        }
        Ok(())
    }
}

/// Kills every `u` syllable in both slots; the reduced slots are then
/// t-powers, giving an m=1-shaped monomial in the surviving generator.
pub fn kill_u(p: &PolyM2) -> PolyM1 {
    p.map_monomials(|m| MonomialM1::new(m.nu.exponent_sum(Gen::T), m.mu.exponent_sum(Gen::T)))
}

/// Kills every `t` syllable in both slots; the result is m=1-shaped in `u`
/// (exponent pairs of `u1`/`u3`).
pub fn kill_t(p: &PolyM2) -> PolyM1 {
    p.map_monomials(|m| MonomialM1::new(m.nu.exponent_sum(Gen::U), m.mu.exponent_sum(Gen::U)))
}

/// Inverts both slots (m=2) / negates both exponents (m=1).
pub fn invert_both_m1(p: &PolyM1) -> PolyM1 {
    p.map_monomials(MonomialM1::invert)
}

pub fn invert_both_m2(p: &PolyM2) -> PolyM2 {
    p.map_monomials(MonomialM2::invert)
}

/// Abelianizes each slot to its sorted `t^a u^b` form. Diagnostic only: this
/// does not preserve the relation span and is excluded from certificates.
pub fn abelianize(p: &PolyM2) -> PolyM2 {
    p.map_monomials(|m| {
        let ab = |w: &SlotWord| {
            let mut r = ReducedWord::identity();
            r.push(Gen::T, w.exponent_sum(Gen::T));
            r.push(Gen::U, w.exponent_sum(Gen::U));
            SlotWord::new(r).expect("t/u word stays a slot word")
        };
        MonomialM2::new(ab(&m.nu), ab(&m.mu))
    })
}

fn rational_to_string(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn rational_from_string(s: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Serializes to a JSON object mapping canonical monomial key -> "num/den".
pub fn poly_to_json<M: Monomial>(p: &Poly<M>) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = p
        .terms()
        .map(|(m, c)| (m.key(), serde_json::Value::String(rational_to_string(c))))
        .collect();
    serde_json::Value::Object(map)
}

pub fn poly_from_json<M: Monomial>(v: &serde_json::Value) -> Result<Poly<M>, PolyError> {
    let obj = v
        .as_object()
        .ok_or_else(|| PolyError::BadKey(v.to_string()))?;
    let mut p = Poly::zero();
    for (k, val) in obj {
        let c = val
            .as_str()
            .ok_or_else(|| PolyError::BadRational(val.to_string()))?;
        p.add_term(M::parse_key(k)?, rational_from_string(c)?);
    }
    Ok(p)
}
