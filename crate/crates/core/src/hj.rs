//! Negative (Hirzebruch–Jung) continued fractions.
//!
//! A chain `[b1,...,bs]` with every `bi >= 2` stands for
//! `b1 - 1/(b2 - 1/(... - 1/bs))`. Values are computed with the continuant
//! recurrence, so no division happens and sequences containing `1`s (as used
//! by zero continued fractions) are handled by the same code.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The pair `(r, a)` with `gcd(r, a) = 1` and `0 < a < r`, naming the cyclic
/// group `1/r(1, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedFraction {
    r: BigInt,
    a: BigInt,
}

impl ReducedFraction {
    pub fn new(r: impl Into<BigInt>, a: impl Into<BigInt>) -> Result<Self> {
        let (r, a) = (r.into(), a.into());
        if !a.is_positive() || a >= r || !r.gcd(&a).is_one() {
            return Err(Error::InvalidFraction {
                r: r.to_string(),
                a: a.to_string(),
            });
        }
        Ok(ReducedFraction { r, a })
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// `r / (r - a)`.
    pub fn dual(&self) -> ReducedFraction {
        ReducedFraction {
            a: &self.r - &self.a,
            r: self.r.clone(),
        }
    }

    /// `r / a'` with `a * a' ≡ 1 (mod r)`; its chain is the reversal of ours.
    pub fn inverse(&self) -> ReducedFraction {
        ReducedFraction {
            a: mod_inverse(&self.a, &self.r),
            r: self.r.clone(),
        }
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.a)
    }
}

/// Inverse of `a` modulo `m`, in `[0, m)`. Requires `gcd(a, m) = 1`.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let egcd = a.extended_gcd(m);
    debug_assert!(egcd.gcd.is_one());
    egcd.x.mod_floor(m)
}

/// A Hirzebruch–Jung chain: nonempty, every entry at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HJChain(Vec<BigInt>);

impl HJChain {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyChain);
        }
        check_min(&entries, 2)?;
        Ok(HJChain(entries))
    }

    pub(crate) fn new_unchecked(entries: Vec<BigInt>) -> Self {
        debug_assert!(!entries.is_empty());
        debug_assert!(entries.iter().all(|b| *b >= BigInt::from(2)));
        HJChain(entries)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; chains are nonempty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> &BigInt {
        &self.0[0]
    }

    pub fn last(&self) -> &BigInt {
        &self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> HJChain {
        HJChain(self.0.iter().rev().cloned().collect())
    }

    pub fn continuants(&self) -> ContinuantTable {
        ContinuantTable::compute(&self.0)
    }

    /// The fraction `r/a` this chain expands.
    pub fn value(&self) -> ReducedFraction {
        let table = self.continuants();
        let (p, q) = table.value();
        ReducedFraction {
            r: p.clone(),
            a: q.clone(),
        }
    }

    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl TryFrom<&[u64]> for HJChain {
    type Error = Error;

    fn try_from(entries: &[u64]) -> Result<Self> {
        HJChain::new(entries.iter().map(|&b| BigInt::from(b)).collect())
    }
}

impl fmt::Display for HJChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

impl FromStr for HJChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HJChain::new(parse_bracketed(s)?)
    }
}

pub(crate) fn check_min(entries: &[BigInt], min: u32) -> Result<()> {
    let bound = BigInt::from(min);
    match entries.iter().position(|b| *b < bound) {
        Some(position) => Err(Error::EntryTooSmall {
            position: position + 1,
            entry: entries[position].to_string(),
            min,
        }),
        None => Ok(()),
    }
}

pub(crate) fn write_bracketed<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    xs: &[T],
) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

/// Parses `"[b1,b2,...]"`; whitespace around entries is accepted.
pub fn parse_bracketed(s: &str) -> Result<Vec<BigInt>> {
    let err = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err("expected [b1,b2,...]"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| parse_decimal(tok.trim()).map_err(|_| err("entries must be decimal integers")))
        .collect()
}

/// Plain decimal integers only: optional leading `-`, then ASCII digits.
pub fn parse_decimal(s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            input: s.to_string(),
            reason: "not a decimal integer".to_string(),
        });
    }
    s.parse::<BigInt>().map_err(|e| Error::Parse {
        input: s.to_string(),
        reason: e.to_string(),
    })
}

/// Numerator and denominator continuants `P_0..P_s`, `Q_0..Q_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuantTable {
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ContinuantTable {
    fn compute(entries: &[BigInt]) -> Self {
        let mut p = Vec::with_capacity(entries.len() + 1);
        let mut q = Vec::with_capacity(entries.len() + 1);
        p.push(BigInt::one());
        q.push(BigInt::zero());
        for (i, b) in entries.iter().enumerate() {
            let (np, nq) = if i == 0 {
                (b.clone(), BigInt::one())
            } else {
                (b * &p[i] - &p[i - 1], b * &q[i] - &q[i - 1])
            };
            p.push(np);
            q.push(nq);
        }
        ContinuantTable { p, q }
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.p
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.q
    }

    /// Number of entries `s`.
    pub fn len(&self) -> usize {
        self.p.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(P_s, Q_s)`.
    pub fn value(&self) -> (&BigInt, &BigInt) {
        let s = self.len();
        (&self.p[s], &self.q[s])
    }

    /// `P_{i-1} Q_i - P_i Q_{i-1} = 1` for every `i >= 1`.
    pub fn determinant_holds(&self) -> bool {
        (1..self.p.len())
            .all(|i| (&self.p[i - 1] * &self.q[i] - &self.p[i] * &self.q[i - 1]).is_one())
    }
}

/// Continuants of an arbitrary sequence with entries at least 1.
pub fn continuants(entries: &[BigInt]) -> Result<ContinuantTable> {
    if entries.is_empty() {
        return Err(Error::EmptyChain);
    }
    check_min(entries, 1)?;
    Ok(ContinuantTable::compute(entries))
}

/// `a_0 = r > a_1 = a > ... > a_s = 1 > a_{s+1} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainderSeq(Vec<BigInt>);

impl RemainderSeq {
    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    /// The chain length `s`.
    pub fn chain_len(&self) -> usize {
        self.0.len() - 2
    }
}

pub fn remainders(f: &ReducedFraction) -> RemainderSeq {
    let mut seq = vec![f.r.clone(), f.a.clone()];
    loop {
        let n = seq.len();
        let (prev, cur) = (&seq[n - 2], &seq[n - 1]);
        if cur.is_zero() {
            break;
        }
        let b = prev.div_ceil(cur);
        let next = b * cur - prev;
        seq.push(next);
    }
    RemainderSeq(seq)
}

/// The chain of `r/a`, with `b_i = ceil(a_{i-1} / a_i)`.
pub fn expand(f: &ReducedFraction) -> HJChain {
    let rem = remainders(f);
    let v = rem.values();
    let entries = (1..v.len() - 1)
        .map(|i| (&v[i - 1] + &v[i + 1]) / &v[i])
        .collect();
    HJChain::new_unchecked(entries)
}

/// The chain of `r/(r-a)`.
pub fn hj_dual(f: &ReducedFraction) -> HJChain {
    expand(&f.dual())
}

pub fn reverse(c: &HJChain) -> HJChain {
    c.reversed()
}
