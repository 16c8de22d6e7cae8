//! k-Wahl chains and dual k-Wahl chains.
//!
//! Both families are grown by the same two productions:
//! `Right`: `[b1,...,bl] -> [b1+1,b2,...,bl,2]` and
//! `Left`: `[b1,...,bl] -> [2,b1,...,b(l-1),bl+1]`.
//! A k-Wahl chain starts from `[k+2]`, a dual one from `k+1` twos.
//!
//! After either production exactly one end of the chain is 2 and the other is
//! at least 3, so a chain can be taken apart deterministically; [`classify`]
//! does that and infers `k` from what is left.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hj::{expand, HJChain, ReducedFraction};

/// Upper bound on `depth` for [`generate`]; `2^(depth+1) - 1` chains per call.
pub const MAX_GENERATE_DEPTH: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttachSide {
    Left,
    Right,
}

impl AttachSide {
    pub fn flipped(self) -> AttachSide {
        match self {
            AttachSide::Left => AttachSide::Right,
            AttachSide::Right => AttachSide::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            AttachSide::Left => 'L',
            AttachSide::Right => 'R',
        }
    }
}

pub fn attach(c: &HJChain, side: AttachSide) -> HJChain {
    let mut entries = c.entries().to_vec();
    let two = BigInt::from(2);
    match side {
        AttachSide::Right => {
            entries[0] += 1;
            entries.push(two);
        }
        AttachSide::Left => {
            *entries.last_mut().expect("chains are nonempty") += 1;
            entries.insert(0, two);
        }
    }
    HJChain::new_unchecked(entries)
}

/// Starting chain: `[k+2]`, or `k+1` twos for the dual family.
pub fn base_chain(k: u64, dual: bool) -> HJChain {
    let entries = if dual {
        let len = usize::try_from(k + 1).expect("k + 1 fits in usize");
        vec![BigInt::from(2); len]
    } else {
        vec![BigInt::from(k) + 2]
    };
    HJChain::new_unchecked(entries)
}

/// Result of [`generate`]: every chain with one construction word, plus any
/// chain reached by a second distinct word.
#[derive(Debug, Clone, Default)]
pub struct Generation {
    pub chains: BTreeMap<HJChain, Vec<AttachSide>>,
    pub duplicates: Vec<(HJChain, Vec<AttachSide>)>,
}

impl Generation {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HJChain> {
        self.chains.keys()
    }
}

/// All chains reachable from the base by at most `depth` productions.
pub fn generate(k: u64, depth: usize, dual: bool) -> Result<Generation> {
    if depth > MAX_GENERATE_DEPTH {
        return Err(Error::DepthExceeded {
            depth,
            limit: MAX_GENERATE_DEPTH,
        });
    }
    let mut out = Generation::default();
    let mut level = vec![(base_chain(k, dual), Vec::new())];
    for step in 0..=depth {
        let mut next = Vec::with_capacity(if step < depth { level.len() * 2 } else { 0 });
        for (chain, word) in level {
            if step < depth {
                for side in [AttachSide::Left, AttachSide::Right] {
                    let mut w = word.clone();
                    w.push(side);
                    next.push((attach(&chain, side), w));
                }
            }
            match out.chains.entry(chain) {
                Entry::Occupied(e) => out.duplicates.push((e.key().clone(), word)),
                Entry::Vacant(e) => {
                    e.insert(word);
                }
            }
        }
        level = next;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WahlKind {
    Wahl(BigInt),
    DualWahl(BigInt),
    /// Only the bare chain `[2]`, which is the base of both families for `k = 0`.
    Both(BigInt),
    Neither,
}

impl WahlKind {
    /// `k` if this is a k-Wahl chain.
    pub fn wahl_k(&self) -> Option<&BigInt> {
        match self {
            WahlKind::Wahl(k) | WahlKind::Both(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_wahl(&self, k: u64) -> bool {
        self.wahl_k() == Some(&BigInt::from(k))
    }

    /// Dual 0-Wahl chains and 0-Wahl chains coincide (same base `[2]`).
    pub fn is_dual_wahl(&self, k: u64) -> bool {
        let k = BigInt::from(k);
        match self {
            WahlKind::DualWahl(j) | WahlKind::Both(j) => *j == k,
            WahlKind::Wahl(j) => j.is_zero() && k.is_zero(),
            WahlKind::Neither => false,
        }
    }
}

impl fmt::Display for WahlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WahlKind::Wahl(k) => write!(f, "Wahl({k})"),
            WahlKind::DualWahl(k) => write!(f, "DualWahl({k})"),
            WahlKind::Both(k) => write!(f, "Both({k})"),
            WahlKind::Neither => f.write_str("Neither"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WahlClassification {
    pub kind: WahlKind,
    /// Productions in construction order, starting from `terminal`.
    pub word: Vec<AttachSide>,
    /// The chain left once no production can be undone.
    pub terminal: HJChain,
}

pub fn word_string(word: &[AttachSide]) -> String {
    word.iter().map(|s| s.letter()).collect()
}

pub fn classify(c: &HJChain) -> WahlClassification {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let mut entries = c.entries().to_vec();
    let mut undone = Vec::new();
    while entries.len() >= 2 {
        let n = entries.len();
        if entries[n - 1] == two && entries[0] >= three {
            entries.pop();
            entries[0] -= 1;
            undone.push(AttachSide::Right);
        } else if entries[0] == two && entries[n - 1] >= three {
            entries.remove(0);
            entries[n - 2] -= 1;
            undone.push(AttachSide::Left);
        } else {
            break;
        }
    }
    undone.reverse();
    let kind = if entries.len() == 1 {
        let k = &entries[0] - &two;
        if k.is_zero() && undone.is_empty() {
            WahlKind::Both(k)
        } else {
            WahlKind::Wahl(k)
        }
    } else if entries.iter().all(|b| *b == two) {
        WahlKind::DualWahl(BigInt::from(entries.len() - 1))
    } else {
        WahlKind::Neither
    };
    WahlClassification {
        kind,
        word: undone,
        terminal: HJChain::new_unchecked(entries),
    }
}

/// Finite sequence of positive block lengths (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EncodingSeq(pub Vec<usize>);

impl EncodingSeq {
    /// Lengths of the maximal runs of equal adjacent items.
    pub fn run_lengths<T: PartialEq>(items: &[T]) -> EncodingSeq {
        let mut blocks: Vec<usize> = Vec::new();
        for (i, item) in items.iter().enumerate() {
            if i > 0 && items[i - 1] == *item {
                *blocks.last_mut().expect("nonempty after first item") += 1;
            } else {
                blocks.push(1);
            }
        }
        EncodingSeq(blocks)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> EncodingSeq {
        EncodingSeq(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for EncodingSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

fn require_wahl(c: &HJChain) -> Result<(WahlClassification, BigInt)> {
    let cls = classify(c);
    match cls.kind.wahl_k() {
        Some(k) => {
            let k = k.clone();
            Ok((cls, k))
        }
        None => Err(Error::NotWahl {
            chain: c.to_string(),
        }),
    }
}

/// Run lengths of the construction word.
pub fn length_encoding(c: &HJChain) -> Result<EncodingSeq> {
    let (cls, _) = require_wahl(c)?;
    Ok(EncodingSeq::run_lengths(&cls.word))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub k: BigInt,
    pub fraction: ReducedFraction,
    /// `expand(r, r-a-k)` is the reversed chain.
    pub reversal_holds: bool,
    /// `a (r-a-k) ≡ 1 (mod r)`.
    pub congruence_holds: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.reversal_holds && self.congruence_holds
    }
}

pub fn check_duality_prop(c: &HJChain) -> Result<DualityReport> {
    let (_, k) = require_wahl(c)?;
    let fraction = c.value();
    let (r, a) = (fraction.r(), fraction.a());
    let partner = r - a - &k;
    // An out-of-range partner is itself a violation.
    let reversal_holds = ReducedFraction::new(r.clone(), partner.clone())
        .map(|g| expand(&g) == c.reversed())
        .unwrap_or(false);
    let congruence_holds = (a * &partner).mod_floor(r).is_one();
    Ok(DualityReport {
        k,
        fraction,
        reversal_holds,
        congruence_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use AttachSide::{Left as L, Right as R};

    fn chain(xs: &[u64]) -> HJChain {
        HJChain::try_from(xs).unwrap()
    }

    fn k(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn attach_examples() {
        assert_eq!(attach(&chain(&[2]), R), chain(&[3, 2]));
        assert_eq!(attach(&chain(&[3, 2]), R), chain(&[4, 2, 2]));
        assert_eq!(attach(&chain(&[3, 2]), L), chain(&[2, 3, 3]));
    }

    #[test]
    fn generate_examples() {
        let g = generate(0, 2, false).unwrap();
        for c in [
            &[2][..],
            &[3, 2],
            &[2, 3],
            &[4, 2, 2],
            &[2, 3, 3],
            &[3, 3, 2],
            &[2, 2, 4],
        ] {
            assert!(g.chains.contains_key(&chain(c)), "missing {c:?}");
        }
        assert_eq!(g.len(), 7);
        assert!(g.duplicates.is_empty());

        let g = generate(2, 0, false).unwrap();
        assert_eq!(g.iter().cloned().collect::<Vec<_>>(), vec![chain(&[4])]);
        let g = generate(1, 0, true).unwrap();
        assert_eq!(g.iter().cloned().collect::<Vec<_>>(), vec![chain(&[2, 2])]);
    }

    #[test]
    fn generate_depth_limit() {
        assert!(matches!(
            generate(0, MAX_GENERATE_DEPTH + 1, false),
            Err(Error::DepthExceeded { .. })
        ));
    }

    #[test]
    fn generated_words_are_injective() {
        for k in 0..4 {
            for dual in [false, true] {
                let g = generate(k, 10, dual).unwrap();
                assert_eq!(g.len(), (1 << 11) - 1);
                assert!(g.duplicates.is_empty());
            }
        }
    }

    #[test]
    fn classify_examples() {
        let cls = classify(&chain(&[3, 2, 4, 2]));
        assert_eq!(cls.kind, WahlKind::Wahl(k(0)));
        assert_eq!(cls.word, vec![L, L, R]);
        assert_eq!(cls.terminal, chain(&[2]));

        assert_eq!(classify(&chain(&[2, 2])).kind, WahlKind::DualWahl(k(1)));
        assert_eq!(classify(&chain(&[3, 3])).kind, WahlKind::Neither);
        assert_eq!(classify(&chain(&[2])).kind, WahlKind::Both(k(0)));
        assert_eq!(classify(&chain(&[7])).kind, WahlKind::Wahl(k(5)));
        assert_eq!(
            classify(&chain(&[2, 2, 2, 2])).kind,
            WahlKind::DualWahl(k(3))
        );
    }

    #[test]
    fn three_three_is_never_generated() {
        let g = generate(1, 12, false).unwrap();
        assert!(!g.chains.contains_key(&chain(&[3, 3])));
    }

    #[test]
    fn classify_recovers_generation_words() {
        for kk in 0..4 {
            for dual in [false, true] {
                for (c, word) in &generate(kk, 8, dual).unwrap().chains {
                    let cls = classify(c);
                    assert_eq!(&cls.word, word, "{c}");
                    assert_eq!(cls.terminal, base_chain(kk, dual));
                    if dual {
                        assert!(cls.kind.is_dual_wahl(kk), "{c}");
                    } else {
                        assert!(cls.kind.is_wahl(kk), "{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn undo_is_exclusive() {
        let two = k(2);
        let three = k(3);
        for kk in 0..4 {
            for dual in [false, true] {
                for c in generate(kk, 8, dual).unwrap().iter() {
                    for side in [L, R] {
                        let d = attach(c, side);
                        let right = *d.last() == two && *d.first() >= three;
                        let left = *d.first() == two && *d.last() >= three;
                        assert!(right ^ left, "{d}");
                        let mut word = classify(c).word;
                        word.push(side);
                        assert_eq!(classify(&d).word, word);
                    }
                }
            }
        }
    }

    #[test]
    fn length_encoding_examples() {
        assert_eq!(
            length_encoding(&chain(&[4, 2, 2])).unwrap(),
            EncodingSeq(vec![2])
        );
        assert_eq!(
            length_encoding(&chain(&[2, 4, 2, 3])).unwrap(),
            EncodingSeq(vec![2, 1])
        );
        assert_eq!(
            length_encoding(&chain(&[3, 2, 4, 2, 4, 2])).unwrap(),
            EncodingSeq(vec![2, 2, 1])
        );
        assert_eq!(length_encoding(&chain(&[5])).unwrap(), EncodingSeq(vec![]));
        assert!(matches!(
            length_encoding(&chain(&[3, 3])),
            Err(Error::NotWahl { .. })
        ));
        assert!(length_encoding(&chain(&[2, 2])).is_err());
    }

    #[test]
    fn length_encoding_is_reversal_invariant() {
        for kk in 0..4 {
            for c in generate(kk, 10, false).unwrap().iter() {
                assert_eq!(
                    length_encoding(c).unwrap(),
                    length_encoding(&c.reversed()).unwrap()
                );
            }
        }
    }

    #[test]
    fn reversal_closure() {
        for kk in 0..4 {
            let g = generate(kk, 9, false).unwrap();
            for c in g.iter() {
                assert!(g.chains.contains_key(&c.reversed()));
            }
        }
    }

    #[test]
    fn duality_examples() {
        let rep = check_duality_prop(&chain(&[3, 2, 4, 2])).unwrap();
        assert_eq!(rep.k, k(0));
        assert_eq!(rep.fraction, ReducedFraction::new(29, 12).unwrap());
        assert!(rep.holds());
        // 12 * 17 = 204 = 7 * 29 + 1
        assert_eq!(204 % 29, 1);

        for kk in 0..5u64 {
            assert!(check_duality_prop(&chain(&[kk + 2])).unwrap().holds());
        }

        let rep = check_duality_prop(&chain(&[4, 2])).unwrap();
        assert_eq!(rep.k, k(1));
        assert_eq!(expand(&ReducedFraction::new(7, 4).unwrap()), chain(&[2, 4]));
        assert!(rep.holds());

        assert!(check_duality_prop(&chain(&[3, 3])).is_err());
    }

    #[test]
    fn duality_over_corpus() {
        for kk in 0..4 {
            for c in generate(kk, 9, false).unwrap().iter() {
                assert!(check_duality_prop(c).unwrap().holds(), "{c}");
            }
        }
    }

    #[test]
    fn hj_dual_of_wahl_is_dual_wahl() {
        for kk in 0..4 {
            for c in generate(kk, 9, false).unwrap().iter() {
                let d = crate::hj::hj_dual(&c.value());
                assert!(classify(&d).kind.is_dual_wahl(kk), "{c} -> {d}");
                if kk == 0 {
                    assert_eq!(d, c.reversed());
                }
            }
        }
    }

    #[test]
    fn run_lengths() {
        assert_eq!(
            EncodingSeq::run_lengths(&[5, 5, 1]),
            EncodingSeq(vec![2, 1])
        );
        assert_eq!(EncodingSeq::run_lengths::<u8>(&[]), EncodingSeq(vec![]));
        assert_eq!(EncodingSeq(vec![2, 1]).to_string(), "(2,1)");
        assert_eq!(EncodingSeq(vec![]).to_string(), "()");
    }
}
