//! Corpus-wide checks. Each suite returns a [`Report`]; a report passes iff
//! it has no failures.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hj::{expand, hj_dual, HJChain, ReducedFraction};
use crate::markov::{gm_numbers, growth_check, square_theorem_check, wahl_partner_search};
use crate::mckay::{theorem_encoding_match, Orientation};
use crate::wahl::{check_duality_prop, generate};
use crate::zerocf::{
    alpha, extremal_pairs, generate_zero_cfs, is_t_chain, is_zero_cf, verify_alpha_theorem,
};

/// At most this many failures are listed; `failure_count` has the total.
pub const MAX_LISTED_FAILURES: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Duality,
    Encoding,
    Alpha0,
    Alpha1,
    Alpha2,
    Weight0,
    Extremal,
    Catalan,
    GmSquare,
    GmWahl,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Duality,
        Suite::Encoding,
        Suite::Alpha0,
        Suite::Alpha1,
        Suite::Alpha2,
        Suite::Weight0,
        Suite::Extremal,
        Suite::Catalan,
        Suite::GmSquare,
        Suite::GmWahl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Encoding => "encoding",
            Suite::Alpha0 => "alpha0",
            Suite::Alpha1 => "alpha1",
            Suite::Alpha2 => "alpha2",
            Suite::Weight0 => "weight0",
            Suite::Extremal => "extremal",
            Suite::Catalan => "catalan",
            Suite::GmSquare => "gm-square",
            Suite::GmWahl => "gm-wahl",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "unknown suite".to_string(),
            })
    }
}

/// Suite parameters. `None` picks the suite's default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    /// Inclusive range of k.
    pub k: Option<(u64, u64)>,
    pub depth: Option<usize>,
    pub bound: Option<u64>,
    pub max_len: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    /// A CLI invocation reproducing the case.
    pub reproducer: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    /// Parameters actually used, defaults filled in.
    pub params: Params,
    pub cases: usize,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
    pub stats: BTreeMap<String, u64>,
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

struct Builder {
    suite: Suite,
    params: Params,
    start: Instant,
    cases: usize,
    failures: Vec<Failure>,
    stats: BTreeMap<String, u64>,
    notes: Vec<String>,
}

impl Builder {
    fn new(suite: Suite, params: Params) -> Self {
        Builder {
            suite,
            params,
            start: Instant::now(),
            cases: 0,
            failures: Vec::new(),
            stats: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, reproducer: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Failure {
            reproducer: reproducer.into(),
            detail: detail.into(),
        });
    }

    fn absorb(&mut self, cases: usize, failures: Vec<Failure>) {
        self.cases += cases;
        self.failures.extend(failures);
    }

    fn stat(&mut self, key: &str, n: u64) {
        *self.stats.entry(key.to_string()).or_default() += n;
    }

    fn finish(mut self) -> Report {
        // Shortest reproducers first.
        self.failures
            .sort_by(|a, b| (a.reproducer.len(), a).cmp(&(b.reproducer.len(), b)));
        let failure_count = self.failures.len();
        self.failures.truncate(MAX_LISTED_FAILURES);
        Report {
            suite: self.suite.name().to_string(),
            params: self.params,
            cases: self.cases,
            failure_count,
            failures: self.failures,
            stats: self.stats,
            notes: self.notes,
            wall_time_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn failure_from(e: Error) -> Failure {
    match e {
        Error::Counterexample { reproducer, detail } => Failure { reproducer, detail },
        other => Failure {
            reproducer: String::new(),
            detail: other.to_string(),
        },
    }
}

/// Runs `check` over `items` in parallel; failures come back sorted.
fn sweep<T: Sync>(
    items: &[T],
    check: impl Fn(&T) -> Result<Option<Failure>> + Send + Sync,
) -> Result<Vec<Failure>> {
    let mut out: Vec<Failure> = items
        .par_iter()
        .map(check)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort();
    Ok(out)
}

fn corpus(k: u64, depth: usize, dual: bool) -> Result<Vec<HJChain>> {
    Ok(generate(k, depth, dual)?.iter().cloned().collect())
}

fn ks(p: &Params, default: (u64, u64)) -> Result<Vec<u64>> {
    let (lo, hi) = p.k.unwrap_or(default);
    if lo > hi {
        return Err(Error::Unsupported(format!("empty k range {lo}..{hi}")));
    }
    Ok((lo..=hi).collect())
}

pub fn run(suite: Suite, params: &Params) -> Result<Report> {
    match suite {
        Suite::Duality => duality(params),
        Suite::Encoding => encoding(params),
        Suite::Alpha0 => alpha_suite(Suite::Alpha0, 0, params),
        Suite::Alpha1 => alpha_suite(Suite::Alpha1, 1, params),
        Suite::Alpha2 => alpha_suite(Suite::Alpha2, 2, params),
        Suite::Weight0 => weight0(params),
        Suite::Extremal => extremal(params),
        Suite::Catalan => catalan(params),
        Suite::GmSquare => gm_square(params),
        Suite::GmWahl => gm_wahl(params),
    }
}

pub fn run_all(params: &Params) -> Result<Vec<Report>> {
    Suite::ALL.iter().map(|&s| run(s, params)).collect()
}

/// `expand(r, r-a-k)` is the reversed chain and `a(r-a-k) ≡ 1 (mod r)`.
pub fn duality(params: &Params) -> Result<Report> {
    let depth = params.depth.unwrap_or(12);
    let kr = ks(params, (0, 3))?;
    let mut b = Builder::new(
        Suite::Duality,
        Params {
            k: Some((kr[0], kr[kr.len() - 1])),
            depth: Some(depth),
            ..Params::default()
        },
    );
    for k in kr {
        let chains = corpus(k, depth, false)?;
        let failures = sweep(&chains, |c| {
            let rep = check_duality_prop(c)?;
            Ok((!rep.holds()).then(|| Failure {
                reproducer: format!("classify {c}"),
                detail: format!(
                    "k = {}, fraction {}: reversal {}, congruence {}",
                    rep.k, rep.fraction, rep.reversal_holds, rep.congruence_holds
                ),
            }))
        })?;
        b.absorb(chains.len(), failures);
    }
    Ok(b.finish())
}

/// Length encoding equals LESR up to reversal.
pub fn encoding(params: &Params) -> Result<Report> {
    let depth = params.depth.unwrap_or(12);
    let kr = ks(params, (0, 3))?;
    let mut b = Builder::new(
        Suite::Encoding,
        Params {
            k: Some((kr[0], kr[kr.len() - 1])),
            depth: Some(depth),
            ..Params::default()
        },
    );
    for k in kr {
        let chains = corpus(k, depth, false)?;
        let results = chains
            .par_iter()
            .map(|c| theorem_encoding_match(c).map(|m| (c, m)))
            .collect::<Result<Vec<_>>>()?;
        let mut failures = Vec::new();
        for (c, m) in &results {
            let key = match m.orientation {
                Some(Orientation::Direct) => "direct",
                Some(Orientation::Reversed) => "reversed",
                Some(Orientation::Both) => "both",
                None => {
                    failures.push(Failure {
                        reproducer: format!("classify {c}"),
                        detail: format!(
                            "{}: length encoding {} vs LESR {}",
                            m.fraction, m.length_encoding, m.lesr
                        ),
                    });
                    "mismatch"
                }
            };
            b.stat(key, 1);
            b.stat(&format!("k{k}_{key}"), 1);
        }
        b.absorb(results.len(), failures);
    }
    Ok(b.finish())
}

/// α over dual k-Wahl chains (k = 2 also requires the HJ dual to be Wahl).
pub fn alpha_suite(suite: Suite, k: u64, params: &Params) -> Result<Report> {
    let depth = params.depth.unwrap_or(10);
    let mut b = Builder::new(
        suite,
        Params {
            k: Some((k, k)),
            depth: Some(depth),
            ..Params::default()
        },
    );
    let chains: Vec<HJChain> = corpus(k, depth, true)?
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    // The theorem check aborts on the first failure; rerun per chain to list all.
    match verify_alpha_theorem(k, depth) {
        Ok(rep) => b.absorb(rep.chains_checked, Vec::new()),
        Err(Error::Counterexample { .. }) => {
            let expected = BigInt::from(match k {
                0 => 2,
                1 => 1,
                _ => 0,
            });
            let failures = sweep(&chains, |c| {
                let a = alpha(c)?;
                Ok((a != expected).then(|| Failure {
                    reproducer: format!("zerocf alpha {c}"),
                    detail: format!("alpha = {a}, expected {expected}"),
                }))
            })?;
            b.absorb(chains.len(), failures);
            if b.failures.is_empty() {
                b.fail("", "HJ dual is not a Wahl T-chain for some chain");
            }
        }
        Err(e) => return Err(e),
    }
    Ok(b.finish())
}

/// For every `r/a` with `r <= bound` and chain length at least 2:
/// `α(b) = 0` iff the HJ dual is a T-chain. The `d = 1` refinement is
/// reported alongside.
pub fn weight0(params: &Params) -> Result<Report> {
    let bound = params.bound.unwrap_or(400);
    let mut b = Builder::new(
        Suite::Weight0,
        Params {
            bound: Some(bound),
            ..Params::default()
        },
    );
    let fractions: Vec<ReducedFraction> = (3..=bound)
        .flat_map(|r| (2..r).filter(move |a| a.gcd(&r) == 1).map(move |a| (r, a)))
        .map(|(r, a)| ReducedFraction::new(r, a))
        .collect::<Result<_>>()?;
    struct Row {
        chain: HJChain,
        alpha: BigInt,
        d: Option<BigInt>,
    }
    let rows: Vec<Row> = fractions
        .par_iter()
        .map(|f| {
            let chain = expand(f);
            let alpha = alpha(&chain)?;
            let d = is_t_chain(&hj_dual(f)).map(|t| t.d);
            Ok(Row { chain, alpha, d })
        })
        .collect::<Result<_>>()?;
    let mut refined_failures = 0u64;
    let mut alpha_is_d_minus_one = 0u64;
    let mut failures = Vec::new();
    for row in &rows {
        let zero = row.alpha.is_zero();
        if zero != row.d.is_some() {
            failures.push(Failure {
                reproducer: format!("zerocf alpha {}", row.chain),
                detail: format!(
                    "alpha = {}, dual T-chain d = {}",
                    row.alpha,
                    row.d.as_ref().map_or("none".to_string(), |d| d.to_string())
                ),
            });
        }
        if zero != row.d.as_ref().is_some_and(|d| d.is_one()) {
            refined_failures += 1;
        }
        if let Some(d) = &row.d {
            b.stat("dual_t_chain", 1);
            if row.alpha == d - 1 {
                alpha_is_d_minus_one += 1;
            }
        }
        if zero {
            b.stat("alpha_zero", 1);
        }
    }
    b.stat("refined_d1_failures", refined_failures);
    b.stat("alpha_eq_d_minus_1", alpha_is_d_minus_one);
    b.notes.push(format!(
        "refined statement (alpha = 0 iff dual is a T-chain with d = 1): {} failures",
        refined_failures
    ));
    b.absorb(rows.len(), failures);
    Ok(b.finish())
}

/// The HJ dual of every 1-Wahl chain has an extremal pair.
pub fn extremal(params: &Params) -> Result<Report> {
    let depth = params.depth.unwrap_or(10);
    let mut b = Builder::new(
        Suite::Extremal,
        Params {
            k: Some((1, 1)),
            depth: Some(depth),
            ..Params::default()
        },
    );
    let chains = corpus(1, depth, false)?;
    let failures = sweep(&chains, |c| {
        let dual = hj_dual(&c.value());
        Ok(extremal_pairs(&dual)?.is_empty().then(|| Failure {
            reproducer: format!("zerocf extremal {dual}"),
            detail: format!("no extremal pair for the dual of {c}"),
        }))
    })?;
    b.absorb(chains.len(), failures);
    Ok(b.finish())
}

pub fn catalan_number(n: u64) -> BigInt {
    // C_n = binom(2n, n) / (n + 1)
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}

/// Blow-up closure of `[1,1]` has `C_(e-1)` elements of length `e`.
pub fn catalan(params: &Params) -> Result<Report> {
    let max_len = params.max_len.unwrap_or(12);
    let mut b = Builder::new(
        Suite::Catalan,
        Params {
            max_len: Some(max_len),
            ..Params::default()
        },
    );
    for e in 2..=max_len {
        let set = generate_zero_cfs(e)?;
        let want = catalan_number(e as u64 - 1);
        b.cases += 1;
        if BigInt::from(set.len()) != want {
            b.fail(
                format!("zerocf all-of-length {e}"),
                format!("{} sequences, expected {want}", set.len()),
            );
        }
        let list: Vec<_> = set.iter().collect();
        let bad = sweep(&list, |z| {
            Ok(
                (!is_zero_cf(z)? || !set.contains(&z.reversed())).then(|| Failure {
                    reproducer: format!("zerocf all-of-length {e}"),
                    detail: format!(
                        "{z} is not a zero continued fraction or its reversal is missing"
                    ),
                }),
            )
        })?;
        b.failures.extend(bad);
        b.stat(&format!("len{e:02}"), set.len() as u64);
    }
    Ok(b.finish())
}

pub fn gm_square(params: &Params) -> Result<Report> {
    let bound = params.bound.unwrap_or(100);
    let mut b = Builder::new(
        Suite::GmSquare,
        Params {
            bound: Some(bound),
            ..Params::default()
        },
    );
    match square_theorem_check(&BigInt::from(bound)) {
        Ok(rep) => {
            b.cases = rep.forward + rep.converse;
            b.stat("forward", rep.forward as u64);
            b.stat("converse", rep.converse as u64);
        }
        Err(e @ Error::Counterexample { .. }) => b.failures.push(failure_from(e)),
        Err(e) => return Err(e),
    }
    Ok(b.finish())
}

/// Every k-GM number `m >= 2` up to the bound has a k-Wahl partner `m/u`;
/// tree growth is monotone.
pub fn gm_wahl(params: &Params) -> Result<Report> {
    let bound = params.bound.unwrap_or(200);
    let kr = ks(params, (0, 2))?;
    let mut b = Builder::new(
        Suite::GmWahl,
        Params {
            k: Some((kr[0], kr[kr.len() - 1])),
            bound: Some(bound),
            ..Params::default()
        },
    );
    let bound_b = BigInt::from(bound);
    for k in kr {
        let numbers: Vec<BigInt> = gm_numbers(k, &bound_b)?
            .into_iter()
            .filter(|m| *m >= BigInt::from(2))
            .collect();
        let failures = sweep(&numbers, |m| {
            Ok(wahl_partner_search(m, k)?.is_empty().then(|| Failure {
                reproducer: format!("gm wahl-partners {m} --k {k}"),
                detail: format!("{k}-GM number {m} has no {k}-Wahl partner"),
            }))
        })?;
        b.absorb(numbers.len(), failures);
        let growth = growth_check(k, &bound_b)?;
        for v in growth.violations {
            b.fail(
                format!("gm tree --k {k} --bound {bound}"),
                format!("growth: {v}"),
            );
        }
        b.stat(&format!("k{k}_numbers"), numbers.len() as u64);
    }
    let ten_free = !gm_numbers(0, &BigInt::from(10_000))?.contains(&BigInt::from(10));
    b.notes
        .push(format!("10 is a 0-GM number below 10^4: {}", !ten_free));
    Ok(b.finish())
}

/// A stat by name, 0 when absent.
pub fn stat(report: &Report, key: &str) -> u64 {
    report.stats.get(key).copied().unwrap_or(0)
}
