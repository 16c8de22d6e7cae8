//! Zero continued fractions.
//!
//! A sequence `[k1,...,ke]` of integers `>= 1` is a zero continued fraction
//! when it is admissible (every prefix continuant `P_1..P_(e-1)` is positive)
//! and its final continuant `P_e` vanishes. Without the admissibility
//! condition the final-continuant test also accepts sequences such as
//! `[1,1,1,1,1]` that no triangulation produces.

mod kset;
mod triangulation;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hj::{check_min, continuants, parse_bracketed, write_bracketed};

pub use kset::{
    alpha, enumerate_k, extremal_pairs, is_t_chain, verify_alpha_theorem, AlphaReport, TChain,
    WeightedZero,
};
pub use triangulation::{all_triangulations, triangulation_to_zero_cf, Triangulation};

/// Upper bound on the length accepted by [`generate_zero_cfs`].
pub const MAX_ZERO_LEN: usize = 14;

/// A candidate zero continued fraction: nonempty, entries at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroCandidate(Vec<BigInt>);

impl ZeroCandidate {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyChain);
        }
        check_min(&entries, 1)?;
        Ok(ZeroCandidate(entries))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> ZeroCandidate {
        ZeroCandidate(self.0.iter().rev().cloned().collect())
    }
}

impl TryFrom<&[u64]> for ZeroCandidate {
    type Error = Error;

    fn try_from(entries: &[u64]) -> Result<Self> {
        ZeroCandidate::new(entries.iter().map(|&k| BigInt::from(k)).collect())
    }
}

impl fmt::Display for ZeroCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

impl FromStr for ZeroCandidate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ZeroCandidate::new(parse_bracketed(s)?)
    }
}

pub fn is_zero_cf(z: &ZeroCandidate) -> Result<bool> {
    if z.len() < 2 {
        return Err(Error::TooShort {
            len: z.len(),
            min: 2,
        });
    }
    let table = continuants(z.entries())?;
    let p = table.numerators();
    let e = z.len();
    Ok(p[e].is_zero() && p[1..e].iter().all(|x| x.is_positive()))
}

/// Where a blow-up inserts its new `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlowupPos {
    /// `[u, ...] -> [1, u+1, ...]`
    Left,
    /// `[..., u, v, ...] -> [..., u+1, 1, v+1, ...]` between entries `i` and
    /// `i+1` (1-based).
    Gap(usize),
    /// `[..., v] -> [..., v+1, 1]`
    Right,
}

impl BlowupPos {
    /// Every valid position for a sequence of length `len`.
    pub fn all(len: usize) -> impl Iterator<Item = BlowupPos> {
        std::iter::once(BlowupPos::Left)
            .chain((1..len).map(BlowupPos::Gap))
            .chain(std::iter::once(BlowupPos::Right))
    }
}

impl fmt::Display for BlowupPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowupPos::Left => f.write_str("left"),
            BlowupPos::Gap(i) => write!(f, "gap {i}"),
            BlowupPos::Right => f.write_str("right"),
        }
    }
}

pub fn blowup(z: &ZeroCandidate, pos: BlowupPos) -> Result<ZeroCandidate> {
    let mut v = z.0.clone();
    let n = v.len();
    match pos {
        BlowupPos::Left => {
            v[0] += 1;
            v.insert(0, BigInt::one());
        }
        BlowupPos::Right => {
            v[n - 1] += 1;
            v.push(BigInt::one());
        }
        BlowupPos::Gap(i) if (1..n).contains(&i) => {
            v[i - 1] += 1;
            v[i] += 1;
            v.insert(i, BigInt::one());
        }
        BlowupPos::Gap(_) => {
            return Err(Error::BadPosition {
                position: pos.to_string(),
                len: n,
            })
        }
    }
    Ok(ZeroCandidate(v))
}

/// All zero continued fractions of length `e`, by blowing up `[1,1]`.
pub fn generate_zero_cfs(e: usize) -> Result<BTreeSet<ZeroCandidate>> {
    if e < 2 {
        return Err(Error::TooShort { len: e, min: 2 });
    }
    if e > MAX_ZERO_LEN {
        return Err(Error::DepthExceeded {
            depth: e,
            limit: MAX_ZERO_LEN,
        });
    }
    let mut level: BTreeSet<ZeroCandidate> = BTreeSet::new();
    level.insert(ZeroCandidate(vec![BigInt::one(), BigInt::one()]));
    for len in 2..e {
        level = level
            .iter()
            .flat_map(|z| BlowupPos::all(len).map(move |pos| blowup(z, pos)))
            .collect::<Result<_>>()?;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zc(xs: &[u64]) -> ZeroCandidate {
        ZeroCandidate::try_from(xs).unwrap()
    }

    #[test]
    fn is_zero_cf_examples() {
        assert!(is_zero_cf(&zc(&[1, 1])).unwrap());
        assert!(is_zero_cf(&zc(&[1, 2, 2, 1])).unwrap());
        assert!(!is_zero_cf(&zc(&[2, 2, 1])).unwrap());
        assert!(matches!(is_zero_cf(&zc(&[1])), Err(Error::TooShort { .. })));
    }

    #[test]
    fn inadmissible_sequences_are_rejected() {
        // final continuant 0, but prefixes pass through 0 or below
        assert!(!is_zero_cf(&zc(&[1, 1, 1, 1, 1])).unwrap());
        assert!(!is_zero_cf(&zc(&[2, 1, 1, 1, 1, 2])).unwrap());
        let p = continuants(zc(&[1, 1, 1, 1, 1]).entries()).unwrap();
        assert!(p.value().0.is_zero());
    }

    #[test]
    fn blowup_examples() {
        assert_eq!(
            blowup(&zc(&[1, 1]), BlowupPos::Gap(1)).unwrap(),
            zc(&[2, 1, 2])
        );
        assert_eq!(
            blowup(&zc(&[1, 2, 1]), BlowupPos::Left).unwrap(),
            zc(&[1, 2, 2, 1])
        );
        assert_eq!(
            blowup(&zc(&[1, 1]), BlowupPos::Left).unwrap(),
            zc(&[1, 2, 1])
        );
        assert_eq!(
            blowup(&zc(&[1, 2, 1]), BlowupPos::Gap(1)).unwrap(),
            zc(&[2, 1, 3, 1])
        );
        assert_eq!(
            blowup(&zc(&[1, 2, 1]), BlowupPos::Right).unwrap(),
            zc(&[1, 2, 2, 1])
        );
        assert!(is_zero_cf(&zc(&[1, 3, 1, 2])).unwrap());
    }

    #[test]
    fn blowup_rejects_bad_gap() {
        for pos in [BlowupPos::Gap(0), BlowupPos::Gap(2), BlowupPos::Gap(7)] {
            assert!(matches!(
                blowup(&zc(&[1, 1]), pos),
                Err(Error::BadPosition { .. })
            ));
        }
    }

    #[test]
    fn generate_examples() {
        let set = |xs: &[&[u64]]| xs.iter().map(|x| zc(x)).collect::<BTreeSet<_>>();
        assert_eq!(generate_zero_cfs(2).unwrap(), set(&[&[1, 1]]));
        assert_eq!(
            generate_zero_cfs(3).unwrap(),
            set(&[&[1, 2, 1], &[2, 1, 2]])
        );
        assert_eq!(
            generate_zero_cfs(4).unwrap(),
            set(&[
                &[1, 2, 2, 1],
                &[2, 2, 1, 3],
                &[2, 1, 3, 1],
                &[1, 3, 1, 2],
                &[3, 1, 2, 2]
            ])
        );
        assert!(generate_zero_cfs(1).is_err());
        assert!(matches!(
            generate_zero_cfs(MAX_ZERO_LEN + 1),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn catalan_counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
        for e in 2..=10 {
            assert_eq!(
                generate_zero_cfs(e).unwrap().len(),
                catalan[e - 1],
                "e = {e}"
            );
        }
    }

    #[test]
    fn generated_sequences_are_zero_and_closed_under_reversal() {
        let all = generate_zero_cfs(8).unwrap();
        for z in &all {
            assert!(is_zero_cf(z).unwrap());
            assert!(all.contains(&z.reversed()));
        }
    }
}
