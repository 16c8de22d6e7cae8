use std::collections::HashMap;

use num_bigint::BigInt;

use super::ZeroCandidate;
use crate::error::{Error, Result};

/// A triangulation of the convex polygon `P_0 ... P_(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    /// Sorted vertex triples, sorted.
    triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn new(n: usize, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let bad = |msg: String| Err(Error::BadTriangulation(msg));
        if n < 3 {
            return bad(format!("polygon needs at least 3 vertices, got {n}"));
        }
        if triangles.len() != n - 2 {
            return bad(format!(
                "expected {} triangles, got {}",
                n - 2,
                triangles.len()
            ));
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for mut t in triangles {
            t.sort_unstable();
            if t[2] >= n || t[0] == t[1] || t[1] == t[2] {
                return bad(format!("degenerate or out-of-range triangle {t:?}"));
            }
            tris.push(t);
        }
        tris.sort_unstable();
        if tris.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated triangle".to_string());
        }

        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &tris {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                *edges.entry(e).or_default() += 1;
            }
        }
        let is_side = |(a, b): (usize, usize)| b == a + 1 || (a == 0 && b == n - 1);
        for i in 0..n {
            let side = if i + 1 == n { (0, n - 1) } else { (i, i + 1) };
            if edges.get(&side) != Some(&1) {
                return bad(format!("side {side:?} must lie in exactly one triangle"));
            }
        }
        let diagonals: Vec<(usize, usize)> =
            edges.keys().copied().filter(|&e| !is_side(e)).collect();
        for &d in &diagonals {
            if edges[&d] != 2 {
                return bad(format!("diagonal {d:?} must lie in exactly two triangles"));
            }
        }
        for (x, &(a, b)) in diagonals.iter().enumerate() {
            for &(c, d) in &diagonals[x + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return bad(format!("diagonals {:?} and {:?} cross", (a, b), (c, d)));
                }
            }
        }
        Ok(Triangulation { n, triangles: tris })
    }

    /// Every triangle contains `apex`.
    pub fn fan(n: usize, apex: usize) -> Result<Self> {
        if n < 3 || apex >= n {
            return Err(Error::BadTriangulation(format!(
                "no fan at {apex} for n = {n}"
            )));
        }
        let tris = (1..n - 1)
            .map(|i| [apex, (apex + i) % n, (apex + i + 1) % n])
            .collect();
        Triangulation::new(n, tris)
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// `v_i`: number of triangles containing `P_i`.
    pub fn vertex_counts(&self) -> Vec<usize> {
        let mut v = vec![0; self.n];
        for t in &self.triangles {
            for &i in t {
                v[i] += 1;
            }
        }
        v
    }
}

/// `[v_1, ..., v_(n-1)]`, dropping `v_0`.
pub fn triangulation_to_zero_cf(t: &Triangulation) -> ZeroCandidate {
    let v = t.vertex_counts();
    ZeroCandidate(v[1..].iter().map(|&x| BigInt::from(x)).collect())
}

/// Every triangulation of the convex `n`-gon.
pub fn all_triangulations(n: usize) -> Result<Vec<Triangulation>> {
    if n < 3 {
        return Err(Error::BadTriangulation(format!(
            "polygon needs at least 3 vertices, got {n}"
        )));
    }
    let polygon: Vec<usize> = (0..n).collect();
    split(&polygon)
        .into_iter()
        .map(|tris| Triangulation::new(n, tris))
        .collect()
}

// The side (first, last) lies in exactly one triangle; pick its apex and
// recurse on the two pieces.
fn split(vs: &[usize]) -> Vec<Vec<[usize; 3]>> {
    if vs.len() < 3 {
        return vec![Vec::new()];
    }
    let last = vs.len() - 1;
    let mut out = Vec::new();
    for apex in 1..last {
        let left = split(&vs[..=apex]);
        let right = split(&vs[apex..]);
        for l in &left {
            for r in &right {
                let mut tris = Vec::with_capacity(l.len() + r.len() + 1);
                tris.push([vs[0], vs[apex], vs[last]]);
                tris.extend_from_slice(l);
                tris.extend_from_slice(r);
                out.push(tris);
            }
        }
    }
    out
}
