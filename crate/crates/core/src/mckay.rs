//! Special representations of `G = 1/r(1,a)`.
//!
//! For cyclic groups the nontrivial special representations are `ρ_{a_i}` for
//! the intermediate remainders `a_1 > ... > a_s = 1` of the Hirzebruch–Jung
//! expansion of `r/a`, so everything here is arithmetic on [`remainders`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hj::{expand, mod_inverse, remainders, HJChain, ReducedFraction};
use crate::wahl::{length_encoding, EncodingSeq};

/// Largest `r` accepted by the brute-force Newton boundary.
pub const BOUNDARY_ORACLE_LIMIT: u64 = 10_000_000;

/// Subscripts `a_1 > ... > a_s = 1` of the special representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialReps(Vec<BigInt>);

impl SpecialReps {
    pub fn indices(&self) -> &[BigInt] {
        &self.0
    }
}

pub fn special_reps(f: &ReducedFraction) -> SpecialReps {
    let rem = remainders(f);
    let v = rem.values();
    SpecialReps(v[1..v.len() - 1].to_vec())
}

/// Successive differences of remainders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffSeq(Vec<BigInt>);

impl DiffSeq {
    /// `d_i = a_i - a_{i+1}` for `i = 1..s-1`.
    pub fn inner(f: &ReducedFraction) -> DiffSeq {
        let reps = special_reps(f);
        DiffSeq(diffs(reps.indices()))
    }

    /// `d_0..d_s`, using `a_0 = r` and `a_{s+1} = 0`.
    pub fn extended(f: &ReducedFraction) -> DiffSeq {
        DiffSeq(diffs(remainders(f).values()))
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }
}

fn diffs(xs: &[BigInt]) -> Vec<BigInt> {
    xs.windows(2).map(|w| &w[0] - &w[1]).collect()
}

/// Length encoding of special representations.
pub fn lesr(f: &ReducedFraction) -> EncodingSeq {
    EncodingSeq::run_lengths(DiffSeq::inner(f).values())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaRow {
    /// 1-based position in the chain.
    pub index: usize,
    pub b: BigInt,
    pub d_prev: BigInt,
    pub d: BigInt,
    /// `b_i = 2` exactly when `d_i = d_{i-1}`.
    pub two_rule: bool,
    /// `b_i a_i = a_{i+1} + a_{i-1}`.
    pub identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaTwoReport {
    pub fraction: ReducedFraction,
    pub rows: Vec<LemmaRow>,
}

impl LemmaTwoReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|row| row.two_rule && row.identity)
    }
}

pub fn lemma_two_rule(f: &ReducedFraction) -> LemmaTwoReport {
    let chain = expand(f);
    let rem = remainders(f);
    let a = rem.values();
    let d = DiffSeq::extended(f);
    let d = d.values();
    let two = BigInt::from(2);
    let rows = chain
        .entries()
        .iter()
        .enumerate()
        .map(|(pos, b)| {
            let i = pos + 1;
            LemmaRow {
                index: i,
                b: b.clone(),
                d_prev: d[i - 1].clone(),
                d: d[i].clone(),
                two_rule: (*b == two) == (d[i] == d[i - 1]),
                identity: b * &a[i] == &a[i + 1] + &a[i - 1],
            }
        })
        .collect();
    LemmaTwoReport {
        fraction: f.clone(),
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Direct,
    Reversed,
    /// Palindromic encodings match both ways.
    Both,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Direct => "direct",
            Orientation::Reversed => "reversed",
            Orientation::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingMatch {
    pub fraction: ReducedFraction,
    pub length_encoding: EncodingSeq,
    pub lesr: EncodingSeq,
    /// `None` when the encodings differ in both orientations.
    pub orientation: Option<Orientation>,
}

impl EncodingMatch {
    pub fn holds(&self) -> bool {
        self.orientation.is_some()
    }
}

/// Compares the length encoding of a k-Wahl chain with the LESR of its
/// fraction, up to reversal.
pub fn theorem_encoding_match(c: &HJChain) -> Result<EncodingMatch> {
    let le = length_encoding(c)?;
    let fraction = c.value();
    let lesr = lesr(&fraction);
    let direct = le == lesr;
    let reversed = le == lesr.reversed();
    let orientation = match (direct, reversed) {
        (true, true) => Some(Orientation::Both),
        (true, false) => Some(Orientation::Direct),
        (false, true) => Some(Orientation::Reversed),
        (false, false) => None,
    };
    Ok(EncodingMatch {
        fraction,
        length_encoding: le,
        lesr,
        orientation,
    })
}

/// The point `(j, i)/r` of `N = Z^2 + (1/r)(1,a)Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToricPoint {
    pub j: BigInt,
    pub i: BigInt,
    pub r: BigInt,
}

impl ToricPoint {
    /// `i ≡ a j (mod r)`.
    pub fn in_lattice(&self, a: &BigInt) -> bool {
        (&self.i - a * &self.j).mod_floor(&self.r).is_zero()
    }
}

impl fmt::Display for ToricPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})/{}", self.j, self.i, self.r)
    }
}

/// One point per special index `a_i`, with the least `j >= 1` such that
/// `a_i ≡ a j (mod r)`.
pub fn toric_points(f: &ReducedFraction) -> Vec<ToricPoint> {
    let inv = mod_inverse(f.a(), f.r());
    special_reps(f)
        .indices()
        .iter()
        .map(|i| {
            // 0 < i < r, so j = i / a mod r is never 0
            let j = (i * &inv).mod_floor(f.r());
            ToricPoint {
                j,
                i: i.clone(),
                r: f.r().clone(),
            }
        })
        .collect()
}

/// Lower-left boundary of the convex hull of the nonzero points of `N` in the
/// closed first quadrant, in numerator coordinates `(j, i)`, by brute force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonBoundary {
    /// Hull vertices from `(0, r)` to `(r, 0)`.
    pub vertices: Vec<(i128, i128)>,
    /// Every lattice point on the boundary, endpoints included, by increasing `j`.
    pub lattice_points: Vec<(i128, i128)>,
}

pub fn newton_boundary(f: &ReducedFraction) -> Result<NewtonBoundary> {
    let too_large = || Error::TooLarge {
        value: f.r().to_string(),
        limit: BOUNDARY_ORACLE_LIMIT,
    };
    let r = f
        .r()
        .to_u64()
        .filter(|&r| r <= BOUNDARY_ORACLE_LIMIT)
        .ok_or_else(too_large)?;
    let (r, a) = (i128::from(r), f.a().to_i128().ok_or_else(too_large)?);
    // Lowest point of N above each abscissa j in [0, r].
    let lowest: Vec<(i128, i128)> = (0..=r)
        .map(|j| {
            let i = (a * j).rem_euclid(r);
            (j, if j == 0 { r } else { i })
        })
        .collect();
    let cross = |o: (i128, i128), p: (i128, i128), q: (i128, i128)| {
        (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
    };
    let mut hull: Vec<(i128, i128)> = Vec::new();
    for &p in &lowest {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lattice_points = lowest
        .iter()
        .copied()
        .filter(|&p| {
            hull.windows(2)
                .any(|w| w[0].0 <= p.0 && p.0 <= w[1].0 && cross(w[0], w[1], p) == 0)
        })
        .collect();
    Ok(NewtonBoundary {
        vertices: hull,
        lattice_points,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricCheck {
    pub points: Vec<ToricPoint>,
    pub all_in_lattice: bool,
    /// The toric points are exactly the boundary lattice points strictly
    /// between `(0, r)` and `(r, 0)`.
    pub boundary_matches: bool,
    /// Toric points that lie inside a boundary edge rather than at a vertex;
    /// these are the positions with `b_i = 2`.
    pub non_vertices: Vec<ToricPoint>,
}

impl ToricCheck {
    pub fn holds(&self) -> bool {
        self.all_in_lattice && self.boundary_matches
    }
}

pub fn toric_check(f: &ReducedFraction) -> Result<ToricCheck> {
    let points = toric_points(f);
    let boundary = newton_boundary(f)?;
    let all_in_lattice = points.iter().all(|p| p.in_lattice(f.a()));
    // newton_boundary succeeded, so r and everything below it fits in i128
    let as_pair = |p: &ToricPoint| (p.j.to_i128().unwrap(), p.i.to_i128().unwrap());
    let mut ours: Vec<_> = points.iter().map(as_pair).collect();
    ours.sort_unstable();
    let n = boundary.lattice_points.len();
    let mut theirs = boundary.lattice_points[1..n - 1].to_vec();
    theirs.sort_unstable();
    let non_vertices = points
        .iter()
        .filter(|p| !boundary.vertices.contains(&as_pair(p)))
        .cloned()
        .collect();
    Ok(ToricCheck {
        boundary_matches: ours == theirs,
        points,
        all_in_lattice,
        non_vertices,
    })
}
