use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::ZeroCandidate;
use crate::error::{Error, Result};
use crate::hj::{hj_dual, HJChain};
use crate::wahl::generate;

/// An element of K(W) for the chain `base`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedZero {
    pub base: HJChain,
    pub zero: ZeroCandidate,
    pub weight: BigInt,
}

impl WeightedZero {
    /// Indices (1-based) where `k_i < b_i`.
    pub fn decremented(&self) -> Vec<usize> {
        self.base
            .entries()
            .iter()
            .zip(self.zero.entries())
            .enumerate()
            .filter(|(_, (b, k))| k < b)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

trait SearchInt: Clone + Ord + Integer + Signed + Send + Sync + Into<BigInt> {
    fn from_big(b: &BigInt) -> Option<Self>;
    /// `k p - pp`, or `None` on overflow.
    fn step(k: &Self, p: &Self, pp: &Self) -> Option<Self>;
}

impl SearchInt for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }

    fn step(k: &Self, p: &Self, pp: &Self) -> Option<Self> {
        k.checked_mul(*p)?.checked_sub(*pp)
    }
}

impl SearchInt for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }

    fn step(k: &Self, p: &Self, pp: &Self) -> Option<Self> {
        Some(k * p - pp)
    }
}

fn check_len(b: &HJChain) -> Result<()> {
    if b.len() < 2 {
        return Err(Error::TooShort {
            len: b.len(),
            min: 2,
        });
    }
    Ok(())
}

/// K(W): every admissible zero continued fraction in the box `1 <= k_i <= b_i`,
/// sorted by entries.
pub fn enumerate_k(b: &HJChain) -> Result<Vec<WeightedZero>> {
    check_len(b)?;
    // An entry counts triangles at one vertex of the (s+1)-gon, so it is at
    // most s-1.
    let cap = BigInt::from(b.len() - 1);
    let bounds: Vec<BigInt> = b.entries().iter().map(|x| x.min(&cap).clone()).collect();
    let zeros = box_search::<i64>(&bounds)
        .unwrap_or_else(|| box_search::<BigInt>(&bounds).expect("BigInt search cannot overflow"));
    let total = b.total();
    let mut out: Vec<WeightedZero> = zeros
        .into_iter()
        .map(|entries| {
            let zero = ZeroCandidate(entries);
            let drop = &total - zero.total();
            assert!(drop.is_positive(), "K(W) element {zero} equals its base");
            WeightedZero {
                base: b.clone(),
                zero,
                weight: drop - 1,
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

fn box_search<T: SearchInt>(bounds: &[BigInt]) -> Option<Vec<Vec<BigInt>>> {
    let bounds: Vec<T> = bounds.iter().map(T::from_big).collect::<Option<_>>()?;
    let firsts: Vec<T> = up_to(T::one(), &bounds[0]).collect();
    let found: Vec<Vec<T>> = firsts
        .into_par_iter()
        .map(|k1| {
            let mut out = Vec::new();
            let mut prefix = vec![k1.clone()];
            descend(&bounds, T::one(), k1, &mut prefix, &mut out).map(|()| out)
        })
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Some(
        found
            .into_iter()
            .map(|z| z.into_iter().map(Into::into).collect())
            .collect(),
    )
}

fn up_to<T: SearchInt>(start: T, end: &T) -> impl Iterator<Item = T> + '_ {
    std::iter::successors(Some(start), |x| Some(x.clone() + T::one())).take_while(move |x| x <= end)
}

// `prefix` holds k_1..k_i with P_(i-1) = pp and P_i = p, both positive.
fn descend<T: SearchInt>(
    bounds: &[T],
    pp: T,
    p: T,
    prefix: &mut Vec<T>,
    out: &mut Vec<Vec<T>>,
) -> Option<()> {
    let i = prefix.len();
    if i + 1 == bounds.len() {
        // k p - pp = 0 has at most one solution.
        let (k, rem) = pp.div_rem(&p);
        if rem.is_zero() && k >= T::one() && k <= bounds[i] {
            let mut z = prefix.clone();
            z.push(k);
            out.push(z);
        }
        return Some(());
    }
    // Smallest k with k p - pp > 0.
    let start = pp.div_floor(&p) + T::one();
    for k in up_to(start, &bounds[i]) {
        let next = T::step(&k, &p, &pp)?;
        prefix.push(k);
        descend(bounds, p.clone(), next, prefix, out)?;
        prefix.pop();
    }
    Some(())
}

/// Minimal weight over K(W).
pub fn alpha(b: &HJChain) -> Result<BigInt> {
    let k = enumerate_k(b)?;
    Ok(k.into_iter()
        .map(|w| w.weight)
        .min()
        .expect("[1,2,...,2,1] always lies in K(W)"))
}

/// Parameters of `1/(d m^2)(1, a d m - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TChain {
    #[serde(serialize_with = "crate::ser::big")]
    pub d: BigInt,
    #[serde(serialize_with = "crate::ser::big")]
    pub m: BigInt,
    #[serde(serialize_with = "crate::ser::big")]
    pub a: BigInt,
}

/// Recognizes `b = r/q` with `r = d m^2`, `q = a d m - 1`, `m > 1`,
/// `gcd(a, m) = 1`; reports the smallest such `m`.
pub fn is_t_chain(b: &HJChain) -> Option<TChain> {
    let f = b.value();
    let (r, q) = (f.r(), f.a());
    let two = BigInt::from(2);
    let top = r.sqrt();
    let mut m = two;
    while m <= top {
        let m2 = &m * &m;
        if r.is_multiple_of(&m2) {
            let d = r / &m2;
            let dm = &d * &m;
            let (a, rem) = (q + BigInt::one()).div_rem(&dm);
            if rem.is_zero() && a.is_positive() && a.gcd(&m).is_one() {
                return Some(TChain { d, m, a });
            }
        }
        m += 1;
    }
    None
}

/// Pairs `i < j` (1-based) such that decrementing `b_i` and `b_j` gives a
/// zero continued fraction.
pub fn extremal_pairs(b: &HJChain) -> Result<Vec<(usize, usize)>> {
    check_len(b)?;
    let s = b.len();
    let mut out = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            let mut v = b.entries().to_vec();
            v[i] -= 1;
            v[j] -= 1;
            if v.iter().any(|x| x.is_zero()) {
                continue;
            }
            if super::is_zero_cf(&ZeroCandidate(v))? {
                out.push((i + 1, j + 1));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    pub k: u64,
    pub depth: usize,
    pub expected: u64,
    pub chains_checked: usize,
}

/// Checks α over every dual k-Wahl chain of length at least 2 up to `depth`.
/// For k = 2 the HJ dual must also be a T-chain with `d = 1`.
pub fn verify_alpha_theorem(k: u64, depth: usize) -> Result<AlphaReport> {
    let expected: u64 = match k {
        0 => 2,
        1 => 1,
        2 => 0,
        _ => {
            return Err(Error::Unsupported(format!(
                "alpha theorem has no case k = {k}"
            )))
        }
    };
    let gen = generate(k, depth, true)?;
    let corpus: Vec<&HJChain> = gen.iter().filter(|c| c.len() >= 2).collect();
    check_corpus(k, depth, expected, &corpus)
}

fn check_corpus(k: u64, depth: usize, expected: u64, corpus: &[&HJChain]) -> Result<AlphaReport> {
    if let Some(e) = corpus
        .par_iter()
        .find_map_first(|c| check_one(k, expected, c).err())
    {
        return Err(e);
    }
    Ok(AlphaReport {
        k,
        depth,
        expected,
        chains_checked: corpus.len(),
    })
}

fn check_one(k: u64, expected: u64, c: &HJChain) -> Result<()> {
    let a = alpha(c)?;
    if a != BigInt::from(expected) {
        return Err(Error::Counterexample {
            reproducer: format!("zerocf alpha {c}"),
            detail: format!("alpha = {a}, expected {expected}"),
        });
    }
    if k == 2 {
        let partner = hj_dual(&c.value());
        match is_t_chain(&partner) {
            Some(t) if t.d.is_one() => {}
            other => {
                return Err(Error::Counterexample {
                    reproducer: format!("classify {partner}"),
                    detail: format!("dual {partner} of {c} is not a Wahl T-chain: {other:?}"),
                })
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hj::{expand, ReducedFraction};
    use crate::zerocf::is_zero_cf;

    fn chain(xs: &[u64]) -> HJChain {
        HJChain::try_from(xs).unwrap()
    }

    fn zeros(b: &HJChain) -> Vec<String> {
        enumerate_k(b)
            .unwrap()
            .iter()
            .map(|w| w.zero.to_string())
            .collect()
    }

    // Every point of the box, no pruning.
    fn brute(b: &[u64]) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut cur = vec![1u64; b.len()];
        let finish = |mut out: Vec<Vec<u64>>| {
            out.sort();
            out
        };
        loop {
            let z = ZeroCandidate::try_from(cur.as_slice()).unwrap();
            if is_zero_cf(&z).unwrap() {
                out.push(cur.clone());
            }
            let mut i = 0;
            while i < b.len() && cur[i] == b[i] {
                cur[i] = 1;
                i += 1;
            }
            if i == b.len() {
                return finish(out);
            }
            cur[i] += 1;
        }
    }

    #[test]
    fn k_set_examples() {
        let k = enumerate_k(&chain(&[2, 2, 3])).unwrap();
        let got: Vec<(String, BigInt)> = k
            .iter()
            .map(|w| (w.zero.to_string(), w.weight.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                ("[1,2,1]".into(), BigInt::from(2)),
                ("[2,1,2]".into(), BigInt::from(1))
            ]
        );
        assert_eq!(zeros(&chain(&[2, 2, 2])), vec!["[1,2,1]", "[2,1,2]"]);
        for n in [2usize, 4, 5, 10] {
            let twos = HJChain::try_from(vec![2u64; n].as_slice()).unwrap();
            let mut expect = vec![2u64; n];
            expect[0] = 1;
            expect[n - 1] = 1;
            let expect = ZeroCandidate::try_from(expect.as_slice())
                .unwrap()
                .to_string();
            assert_eq!(zeros(&twos), vec![expect]);
        }
        assert!(matches!(
            enumerate_k(&chain(&[5])),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&chain(&[2, 2])).unwrap(), BigInt::from(1));
        assert_eq!(alpha(&chain(&[3, 2])).unwrap(), BigInt::from(2));
        assert_eq!(alpha(&chain(&[2, 2, 2])).unwrap(), BigInt::from(0));
        assert!(alpha(&chain(&[7])).is_err());
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for r in 3u64..60 {
            for a in 2..r {
                let Ok(f) = ReducedFraction::new(r, a) else {
                    continue;
                };
                let b = expand(&f);
                let bs: Vec<u64> = b.entries().iter().map(|x| x.to_u64().unwrap()).collect();
                if bs.iter().product::<u64>() > 200_000 {
                    continue;
                }
                let got: Vec<Vec<u64>> = enumerate_k(&b)
                    .unwrap()
                    .iter()
                    .map(|w| {
                        w.zero
                            .entries()
                            .iter()
                            .map(|x| x.to_u64().unwrap())
                            .collect()
                    })
                    .collect();
                assert_eq!(got, brute(&bs), "b = {b}");
            }
        }
    }

    #[test]
    fn bigint_path_agrees_with_i64_path() {
        let b = chain(&[3, 2, 5, 2, 2, 4]);
        let small = box_search::<i64>(b.entries()).unwrap();
        let mut big = box_search::<BigInt>(b.entries()).unwrap();
        let mut small_sorted = small.clone();
        small_sorted.sort();
        big.sort();
        assert_eq!(small_sorted, big);
        assert!(!big.is_empty());
        // the i64 path reports overflow instead of wrapping
        assert_eq!(i64::step(&(i64::MAX / 2), &3, &0), None);
        assert_eq!(i64::step(&2, &3, &i64::MIN), None);
    }

    #[test]
    fn huge_entries_are_capped_by_length() {
        let n: BigInt = BigInt::from(10).pow(30u32);
        let b = HJChain::new(vec![n.clone(), BigInt::from(2)]).unwrap();
        let k = enumerate_k(&b).unwrap();
        // [k1, k2] = 0 iff k1 k2 = 1
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].zero.to_string(), "[1,1]");
        assert_eq!(k[0].weight, &n - 1);
    }

    #[test]
    fn minimal_weight_maximizes_sum() {
        for c in generate(1, 6, true)
            .unwrap()
            .iter()
            .filter(|c| c.len() >= 2)
        {
            let k = enumerate_k(c).unwrap();
            let best = k.iter().min_by_key(|w| w.weight.clone()).unwrap();
            let max_sum = k.iter().map(|w| w.zero.total()).max().unwrap();
            assert_eq!(best.zero.total(), max_sum);
            for w in &k {
                assert!(!w.decremented().is_empty());
                assert!(!w.weight.is_negative());
            }
        }
    }

    #[test]
    fn t_chain_examples() {
        let t = is_t_chain(&chain(&[4])).unwrap();
        assert_eq!((t.d, t.m, t.a), (1.into(), 2.into(), 1.into()));
        let t = is_t_chain(&chain(&[3, 3])).unwrap();
        assert_eq!((t.d, t.m, t.a), (2.into(), 2.into(), 1.into()));
        assert_eq!(is_t_chain(&chain(&[3, 2, 4, 2])), None);
        // 25/14 = 1/25(1, 3*5-1)
        let t = is_t_chain(&expand(&ReducedFraction::new(25, 14).unwrap())).unwrap();
        assert_eq!((t.d, t.m, t.a), (1.into(), 5.into(), 3.into()));
    }

    #[test]
    fn t_chain_matches_parameter_scan() {
        let mut expected = std::collections::BTreeSet::new();
        for m in 2u64..=11 {
            for d in 1u64..=30 {
                for a in 1..m {
                    if num_integer::gcd(a, m) == 1 {
                        expected.insert((d * m * m, a * d * m - 1));
                    }
                }
            }
        }
        for r in 2u64..=120 {
            for q in 1..r {
                let Ok(f) = ReducedFraction::new(r, q) else {
                    continue;
                };
                let got = is_t_chain(&expand(&f)).is_some();
                assert_eq!(got, expected.contains(&(r, q)), "{r}/{q}");
            }
        }
    }

    #[test]
    fn extremal_examples() {
        assert_eq!(extremal_pairs(&chain(&[2, 2])).unwrap(), vec![(1, 2)]);
        assert_eq!(extremal_pairs(&chain(&[2, 2, 3])).unwrap(), vec![(2, 3)]);
        // [1,2,...,2,1] has weight exactly 1 inside [2,...,2]
        for n in 4..9 {
            let twos = HJChain::try_from(vec![2u64; n].as_slice()).unwrap();
            assert_eq!(extremal_pairs(&twos).unwrap(), vec![(1, n)]);
        }
        assert!(extremal_pairs(&chain(&[9])).is_err());
    }

    #[test]
    fn extremal_pairs_are_weight_one_elements() {
        for c in generate(0, 5, true)
            .unwrap()
            .iter()
            .filter(|c| c.len() >= 2)
        {
            let from_k: Vec<(usize, usize)> = enumerate_k(c)
                .unwrap()
                .iter()
                .filter(|w| w.weight.is_one())
                .filter_map(|w| match w.decremented().as_slice() {
                    [i, j] => Some((*i, *j)),
                    _ => None,
                })
                .collect();
            assert_eq!(extremal_pairs(c).unwrap(), from_k, "{c}");
        }
    }

    #[test]
    fn alpha_theorem_small_depths() {
        assert_eq!(verify_alpha_theorem(1, 0).unwrap().chains_checked, 1);
        assert_eq!(verify_alpha_theorem(0, 1).unwrap().chains_checked, 2);
        assert_eq!(verify_alpha_theorem(2, 0).unwrap().chains_checked, 1);
        for k in 0..=2 {
            verify_alpha_theorem(k, 6).unwrap();
        }
        assert!(matches!(
            verify_alpha_theorem(3, 2),
            Err(Error::Unsupported(_))
        ));
    }
}
