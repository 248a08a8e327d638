//! Dense exact linear algebra over ℚ.
//!
//! Sizes here are tiny (at most a few hundred columns), so the plain
//! Gauss–Jordan routines below are all we need.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Q, Z};

/// Reduced row echelon form. Zero rows are dropped; returns the rows and the
/// pivot column of each row.
pub fn rref(mut rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    if !rows[r][j].is_zero() {
                        let d = &f * &rows[r][j];
                        rows[i][j] -= d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows.to_vec()).1.len()
}

/// Basis of the null space `{v : M v = 0}` where `matrix` is given by rows.
pub fn kernel(matrix: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (rows, pivots) = if matrix.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        rref(matrix.to_vec())
    };
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Scale to a primitive integer vector whose first nonzero entry is positive.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    let mut den = Z::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<Z> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let mut g = Z::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(Z::one(), |x| if x.is_negative() { -Z::one() } else { Z::one() });
    ints.into_iter()
        .map(|x| Q::from_integer(x / &g * &sign))
        .collect()
}

/// Canonical basis of a row space: RREF rows scaled to primitive integer vectors.
pub fn canonical_basis(rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    rref(rows).0.iter().map(|r| primitive(r)).collect()
}

/// Coordinates with respect to a fixed family of linearly independent vectors.
#[derive(Debug, Clone)]
pub struct CoordinateSolver {
    dim: usize,
    pivots: Vec<usize>,
    // transform[i] expresses reduced row i as a combination of the inputs
    transform: Vec<Vec<Q>>,
    reduced: Vec<Vec<Q>>,
}

impl CoordinateSolver {
    /// Returns `None` when the vectors are linearly dependent.
    pub fn new(vectors: &[Vec<Q>]) -> Option<Self> {
        let k = vectors.len();
        let dim = vectors.first().map_or(0, Vec::len);
        let mut rows: Vec<Vec<Q>> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut r = v.clone();
                r.extend((0..k).map(|j| if i == j { Q::one() } else { Q::zero() }));
                r
            })
            .collect();
        // Gauss–Jordan on the first `dim` columns only.
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            let Some(p) = (r..k).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..k {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..dim + k {
                        if !rows[r][j].is_zero() {
                            let d = &f * &rows[r][j];
                            rows[i][j] -= d;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == k {
                break;
            }
        }
        if r < k {
            return None;
        }
        let transform = rows.iter().map(|row| row[dim..].to_vec()).collect();
        let reduced = rows.iter().map(|row| row[..dim].to_vec()).collect();
        Some(CoordinateSolver {
            dim,
            pivots,
            transform,
            reduced,
        })
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Coordinates of `target`, or `None` if it is not in the span.
    pub fn solve(&self, target: &[Q]) -> Option<Vec<Q>> {
        debug_assert_eq!(target.len(), self.dim);
        let k = self.pivots.len();
        let mut residual = target.to_vec();
        let mut coords = vec![Q::zero(); k];
        for (i, &p) in self.pivots.iter().enumerate() {
            let t = residual[p].clone();
            if t.is_zero() {
                continue;
            }
            for (j, x) in self.reduced[i].iter().enumerate() {
                if !x.is_zero() {
                    residual[j] -= &t * x;
                }
            }
            for (j, x) in self.transform[i].iter().enumerate() {
                if !x.is_zero() {
                    coords[j] += &t * x;
                }
            }
        }
        if residual.iter().all(Zero::is_zero) {
            Some(coords)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let k = kernel(&[v(&[1, 1, 1])], 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            let s: Q = x.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn primitive_scaling() {
        let p = primitive(&[q(0), Q::new(Z::from(-2), Z::from(3)), Q::new(Z::from(4), Z::from(3))]);
        assert_eq!(p, v(&[0, 1, -2]));
    }

    #[test]
    fn solver_recovers_coordinates() {
        let basis = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let s = CoordinateSolver::new(&basis).unwrap();
        assert_eq!(s.solve(&v(&[2, 5, 3])), Some(v(&[2, 3])));
        assert_eq!(s.solve(&v(&[1, 0, 0])), None);
        assert!(CoordinateSolver::new(&[v(&[1, 2]), v(&[2, 4])]).is_none());
    }
}
