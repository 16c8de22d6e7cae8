//! k-generalized Markov triples: positive solutions of
//! `x^2 + y^2 + z^2 + k(xy + yz + xz) = (3 + 3k) xyz`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hj::{expand, ReducedFraction};
use crate::wahl::classify;

/// Largest `m` accepted by [`wahl_partner_search`].
pub const PARTNER_SEARCH_LIMIT: u64 = 10_000_000;

/// A k-GM triple, entries sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GMTriple {
    pub k: u64,
    #[serde(serialize_with = "crate::ser::bigs")]
    entries: [BigInt; 3],
}

impl GMTriple {
    pub fn new(k: u64, x: BigInt, y: BigInt, z: BigInt) -> Result<Self> {
        if !is_gm_triple(k, &x, &y, &z) {
            return Err(Error::NotGmTriple {
                k,
                x: x.to_string(),
                y: y.to_string(),
                z: z.to_string(),
            });
        }
        let mut entries = [x, y, z];
        entries.sort();
        Ok(GMTriple { k, entries })
    }

    pub fn fundamental(k: u64) -> Self {
        GMTriple {
            k,
            entries: [BigInt::one(), BigInt::one(), BigInt::one()],
        }
    }

    pub fn entries(&self) -> &[BigInt; 3] {
        &self.entries
    }

    pub fn largest(&self) -> &BigInt {
        &self.entries[2]
    }
}

impl fmt::Display for GMTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.entries;
        write!(f, "({x},{y},{z})")
    }
}

fn lhs(k: &BigInt, x: &BigInt, y: &BigInt, z: &BigInt) -> BigInt {
    x * x + y * y + z * z + k * (x * y + y * z + x * z)
}

fn rhs(k: &BigInt, x: &BigInt, y: &BigInt, z: &BigInt) -> BigInt {
    (3 + 3 * k) * x * y * z
}

pub fn is_gm_triple(k: u64, x: &BigInt, y: &BigInt, z: &BigInt) -> bool {
    if !(x.is_positive() && y.is_positive() && z.is_positive()) {
        return false;
    }
    let k = BigInt::from(k);
    lhs(&k, x, y, z) == rhs(&k, x, y, z)
}

/// Result of a Vieta move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutation {
    pub triple: GMTriple,
    /// 1-based position of the new coordinate in the sorted result;
    /// mutating there undoes the move.
    pub index: usize,
}

/// Replaces coordinate `index` (1-based, in sorted order) by its Vieta
/// partner `(3+3k)xy - k(x+y) - z`.
pub fn mutate(t: &GMTriple, index: usize) -> Result<Mutation> {
    if !(1..=3).contains(&index) {
        return Err(Error::Unsupported(format!(
            "mutation index {index} not in 1..=3"
        )));
    }
    let i = index - 1;
    let k = BigInt::from(t.k);
    let z = &t.entries[i];
    let x = &t.entries[(i + 1) % 3];
    let y = &t.entries[(i + 2) % 3];
    let new: BigInt = (3 + 3 * &k) * x * y - &k * (x + y) - z;
    if !new.is_positive() {
        return Err(Error::NonPositiveRoot {
            index,
            value: new.to_string(),
        });
    }
    let mut entries = t.entries.clone();
    entries[i] = new.clone();
    entries.sort();
    let pos = entries
        .iter()
        .position(|e| *e == new)
        .expect("new entry present");
    let triple = GMTriple::new(
        t.k,
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
    )?;
    Ok(Mutation {
        triple,
        index: pos + 1,
    })
}

/// Every triple reachable from `(1,1,1)` with all entries at most `bound`.
pub fn gm_tree(k: u64, bound: &BigInt) -> Result<BTreeSet<GMTriple>> {
    let root = GMTriple::fundamental(k);
    let mut seen = BTreeSet::new();
    if root.largest() > bound {
        return Ok(seen);
    }
    seen.insert(root.clone());
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let children: Vec<GMTriple> = frontier
            .par_iter()
            .map(|t| {
                (1..=3)
                    .map(|i| mutate(t, i).map(|m| m.triple))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .filter(|c| c.largest() <= bound)
            .collect();
        frontier = children
            .into_iter()
            .filter(|c| seen.insert(c.clone()))
            .collect();
        frontier.sort();
    }
    Ok(seen)
}

pub fn gm_numbers(k: u64, bound: &BigInt) -> Result<BTreeSet<BigInt>> {
    Ok(gm_tree(k, bound)?
        .into_iter()
        .flat_map(|t| t.entries)
        .collect())
}

/// Independent scan: all `x <= y <= z <= bound` solving the equation,
/// solving for `z` from the discriminant.
pub fn gm_brute_force(k: u64, bound: u64) -> BTreeSet<GMTriple> {
    let kb = BigInt::from(k);
    let bound_b = BigInt::from(bound);
    (1..=bound)
        .into_par_iter()
        .flat_map_iter(|x| {
            let kb = kb.clone();
            let bound_b = bound_b.clone();
            (x..=bound).flat_map(move |y| {
                let (x, y) = (BigInt::from(x), BigInt::from(y));
                // z^2 - B z + C = 0
                let b: BigInt = (3 + 3 * &kb) * &x * &y - &kb * (&x + &y);
                let c = &x * &x + &y * &y + &kb * &x * &y;
                let disc: BigInt = &b * &b - 4 * &c;
                let s = if disc.is_negative() {
                    None
                } else {
                    Some(disc.sqrt())
                };
                let roots = match s {
                    Some(s) if &s * &s == disc => vec![&b - &s, &b + &s],
                    _ => Vec::new(),
                };
                roots
                    .into_iter()
                    .filter_map(|twice| {
                        let (z, rem) = twice.div_rem(&BigInt::from(2u8));
                        (rem.is_zero() && z >= y && z <= bound_b).then_some(z)
                    })
                    .filter_map(|z| GMTriple::new(k, x.clone(), y.clone(), z).ok())
                    .collect::<Vec<_>>()
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    #[serde(serialize_with = "crate::ser::big")]
    pub bound: BigInt,
    /// 0-GM triples whose squares were checked.
    pub forward: usize,
    /// 2-GM triples whose square roots were checked.
    pub converse: usize,
}

/// `(a,b,c)` is 0-GM iff `(a^2,b^2,c^2)` is 2-GM, over the trees up to
/// `bound` and `bound^2`.
pub fn square_theorem_check(bound: &BigInt) -> Result<SquareReport> {
    let zero = gm_tree(0, bound)?;
    for t in &zero {
        let [a, b, c] = &t.entries;
        if !is_gm_triple(2, &(a * a), &(b * b), &(c * c)) {
            return Err(Error::Counterexample {
                reproducer: "gm square-check".into(),
                detail: format!("squares of 0-GM triple {t} are not 2-GM"),
            });
        }
    }
    let two = gm_tree(2, &(bound * bound))?;
    for t in &two {
        let roots: Vec<BigInt> = t.entries.iter().map(|e| e.sqrt()).collect();
        if roots.iter().zip(&t.entries).any(|(r, e)| r * r != *e) {
            return Err(Error::Counterexample {
                reproducer: "gm square-check".into(),
                detail: format!("2-GM triple {t} has a non-square entry"),
            });
        }
        let root = GMTriple::new(0, roots[0].clone(), roots[1].clone(), roots[2].clone());
        if !root.as_ref().is_ok_and(|r| zero.contains(r)) {
            return Err(Error::Counterexample {
                reproducer: "gm square-check".into(),
                detail: format!("square roots of 2-GM triple {t} are not a 0-GM tree triple"),
            });
        }
    }
    Ok(SquareReport {
        bound: bound.clone(),
        forward: zero.len(),
        converse: two.len(),
    })
}

/// All `0 < u < m`, coprime to `m`, with `m/u` a k-Wahl chain.
pub fn wahl_partner_search(m: &BigInt, k: u64) -> Result<Vec<BigInt>> {
    let two = BigInt::from(2);
    if *m < two {
        return Err(Error::Unsupported(format!(
            "partner search needs m >= 2, got {m}"
        )));
    }
    let m_small = m
        .to_u64()
        .filter(|&v| v <= PARTNER_SEARCH_LIMIT)
        .ok_or_else(|| Error::TooLarge {
            value: m.to_string(),
            limit: PARTNER_SEARCH_LIMIT,
        })?;
    let mut out: Vec<BigInt> = (1..m_small)
        .into_par_iter()
        .filter_map(|u| {
            let u = BigInt::from(u);
            let f = ReducedFraction::new(m.clone(), u.clone()).ok()?;
            classify(&expand(&f)).kind.is_wahl(k).then_some(u)
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub k: u64,
    #[serde(serialize_with = "crate::ser::big")]
    pub bound: BigInt,
    pub triples: usize,
    /// Triples where mutating a non-maximal coordinate failed to exceed the
    /// current maximum.
    pub violations: Vec<String>,
}

pub fn growth_check(k: u64, bound: &BigInt) -> Result<GrowthReport> {
    let tree = gm_tree(k, bound)?;
    let mut violations = Vec::new();
    for t in &tree {
        for i in 1..=2 {
            let m = mutate(t, i)?;
            if m.triple.largest() <= t.largest() {
                violations.push(format!("{t} at {i} -> {}", m.triple));
            }
        }
    }
    Ok(GrowthReport {
        k,
        bound: bound.clone(),
        triples: tree.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: u64, x: u64, y: u64, z: u64) -> GMTriple {
        GMTriple::new(k, x.into(), y.into(), z.into()).unwrap()
    }

    fn big(x: u64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn membership_examples() {
        for k in 0..6 {
            assert!(is_gm_triple(k, &big(1), &big(1), &big(1)));
        }
        assert!(is_gm_triple(0, &big(1), &big(2), &big(5)));
        assert!(!is_gm_triple(0, &big(1), &big(1), &big(3)));
        assert!(!is_gm_triple(0, &big(0), &big(0), &big(0)));
        assert!(GMTriple::new(0, big(1), big(1), big(3)).is_err());
        assert_eq!(t(0, 5, 1, 2).entries(), &[big(1), big(2), big(5)]);
    }

    #[test]
    fn mutation_examples() {
        let m = mutate(&GMTriple::fundamental(0), 3).unwrap();
        assert_eq!(m.triple, t(0, 1, 1, 2));
        let m = mutate(&GMTriple::fundamental(1), 3).unwrap();
        assert_eq!(m.triple, t(1, 1, 1, 3));
        assert!(is_gm_triple(1, &big(1), &big(1), &big(3)));

        let start = t(0, 1, 2, 5);
        let m = mutate(&start, 1).unwrap();
        assert_eq!(m.triple, t(0, 2, 5, 29));
        assert_eq!(m.index, 3);
        assert_eq!(mutate(&m.triple, m.index).unwrap().triple, start);
        assert!(mutate(&start, 4).is_err());
    }

    #[test]
    fn trees_match_examples() {
        let tree = gm_tree(0, &big(30)).unwrap();
        for want in [(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29)] {
            assert!(tree.contains(&t(0, want.0, want.1, want.2)));
        }
        assert_eq!(gm_tree(0, &big(1)).unwrap().len(), 1);
        let one: Vec<GMTriple> = gm_tree(1, &big(3)).unwrap().into_iter().collect();
        assert_eq!(one, vec![t(1, 1, 1, 1), t(1, 1, 1, 3)]);
        assert!(gm_tree(0, &big(0)).unwrap().is_empty());

        let nums: Vec<BigInt> = gm_numbers(0, &big(30)).unwrap().into_iter().collect();
        assert_eq!(nums, [1, 2, 5, 13, 29].map(big));
        let nums: Vec<BigInt> = gm_numbers(1, &big(3)).unwrap().into_iter().collect();
        assert_eq!(nums, [1, 3].map(big));
    }

    #[test]
    fn trees_match_brute_force() {
        for (k, bound) in [(0, 1000), (1, 600), (2, 600), (3, 300)] {
            assert_eq!(
                gm_tree(k, &big(bound)).unwrap(),
                gm_brute_force(k, bound),
                "k = {k}"
            );
        }
    }

    #[test]
    fn mutation_is_involutive_on_trees() {
        for k in 0..4 {
            for tr in gm_tree(k, &big(5000)).unwrap() {
                for i in 1..=3 {
                    let m = mutate(&tr, i).unwrap();
                    assert_eq!(mutate(&m.triple, m.index).unwrap().triple, tr);
                }
            }
        }
    }

    #[test]
    fn squares() {
        assert!(is_gm_triple(2, &big(1), &big(4), &big(25)));
        assert!(is_gm_triple(2, &big(4), &big(25), &big(841)));
        let r = square_theorem_check(&big(100)).unwrap();
        assert!(r.forward > 0 && r.converse > 0);
    }

    #[test]
    fn ten_is_not_markov_but_has_partners() {
        assert!(!gm_numbers(0, &big(10_000)).unwrap().contains(&big(10)));
        assert_eq!(
            wahl_partner_search(&big(10), 0).unwrap(),
            vec![big(3), big(7)]
        );
        assert_eq!(wahl_partner_search(&big(2), 0).unwrap(), vec![big(1)]);
        assert!(wahl_partner_search(&big(1), 0).is_err());
    }

    #[test]
    fn every_small_gm_number_has_a_partner() {
        for k in 0..=2 {
            for m in gm_numbers(k, &big(200)).unwrap() {
                if m >= big(2) {
                    assert!(
                        !wahl_partner_search(&m, k).unwrap().is_empty(),
                        "k={k} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn growth() {
        for k in 0..4 {
            let r = growth_check(k, &big(10_000)).unwrap();
            assert!(r.violations.is_empty(), "{:?}", r.violations);
        }
    }
}
