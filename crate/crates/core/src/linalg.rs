//! Exact rational matrices: rank, nullspace, characteristic polynomial, and
//! the two concrete systems of the line-grid argument.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

pub type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.data[i * k + i] = Q::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix { rows: rows.len(), cols, data: rows.iter().flatten().map(|&x| q(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum()).collect()
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    fn row_lcm(&self, i: usize) -> BigInt {
        self.data[i * self.cols..(i + 1) * self.cols]
            .iter()
            .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()))
    }

    /// Rows scaled to integers by their denominators' lcm.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let l = Q::from_integer(self.row_lcm(i));
                self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| (x * &l).to_integer()).collect()
            })
            .collect()
    }
}

/// Fraction-free (Bareiss) row echelon form; returns the pivot columns and
/// the last pivot, which for a square full-rank input is the determinant
/// up to the sign of the row swaps.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>, BigInt, bool) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut odd_swaps = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        if p != r {
            a.swap(p, r);
            odd_swaps = !odd_swaps;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (a, pivots, prev, odd_swaps)
}

/// Exact rank and a nullspace basis. Each basis vector has a 1 in one free
/// column and 0 in the others, then is scaled to primitive integers.
pub fn rank_nullspace(a: &RationalMatrix) -> (usize, Vec<Vec<Q>>) {
    let (ech, pivots, _, _) = bareiss(a.integer_rows(), a.cols);
    let rank = pivots.len();
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut x = vec![Q::zero(); a.cols];
        x[f] = Q::one();
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let row = &ech[k];
            let s: Q = (pc + 1..a.cols).map(|j| Q::from_integer(row[j].clone()) * &x[j]).sum();
            x[pc] = -s / Q::from_integer(row[pc].clone());
        }
        basis.push(primitive(x));
    }
    (rank, basis)
}

fn primitive(x: Vec<Q>) -> Vec<Q> {
    let l = x.iter().fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| num_integer::gcd(acc, v.clone()));
    if g.is_zero() {
        return x;
    }
    let sign = ints.iter().find(|v| !v.is_zero()).map_or(BigInt::one(), |v| v.signum());
    ints.into_iter().map(|v| Q::from_integer(v * &sign / &g)).collect()
}

pub fn rank(a: &RationalMatrix) -> usize {
    bareiss(a.integer_rows(), a.cols).1.len()
}

pub fn det(a: &RationalMatrix) -> Result<Q, AlgebraError> {
    if a.rows != a.cols {
        return Err(AlgebraError::NotSquare { rows: a.rows, cols: a.cols });
    }
    if a.rows == 0 {
        return Ok(Q::one());
    }
    let scale: BigInt = (0..a.rows).map(|i| a.row_lcm(i)).product();
    let (_, pivots, last, odd) = bareiss(a.integer_rows(), a.cols);
    if pivots.len() < a.rows {
        return Ok(Q::zero());
    }
    let d = Q::new(last, scale);
    Ok(if odd { -d } else { d })
}

/// Coefficients `c[0..=k]` of the monic `det(λI − A) = Σ c[i] λ^i`
/// (Faddeev–LeVerrier, exact). For even `k` this equals `det(A − λI)`.
pub fn charpoly(a: &RationalMatrix) -> Result<Vec<Q>, AlgebraError> {
    if a.rows != a.cols {
        return Err(AlgebraError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let k = a.rows;
    let mut c = vec![Q::zero(); k + 1];
    c[k] = Q::one();
    let mut m = RationalMatrix::zeros(k, k);
    for step in 1..=k {
        // M_step = A·M_{step-1} + c_{k-step+1}·I
        let mut next = a.mul(&m);
        for i in 0..k {
            let v = next.get(i, i) + &c[k - step + 1];
            next.set(i, i, v);
        }
        m = next;
        c[k - step] = -a.mul(&m).trace() / q(step as i64);
    }
    Ok(c)
}

/// The 12×12 matrix of the four-line system; columns `y1..y4, m1..m4,
/// m′1..m′4`, one row per intersection point.
pub fn build_matrix_m(r: i64) -> Result<RationalMatrix, AlgebraError> {
    if r < 4 {
        return Err(AlgebraError::InvalidParams(format!("matrix needs r >= 4, got {r}")));
    }
    #[rustfmt::skip]
    let rows = vec![
        vec![1, -1, 0, 0,   1, 0, 0, 0,   0, -1, 0, 0],
        vec![0, -1, 1, 0,   0, 0, 2, 0,   0, -2, 0, 0],
        vec![0, 0, 1, -1,   0, 0, 3, 0,   0, 0, 0, -3],
        vec![-1, 0, 1, 0,   0, 0, 1, 0,   -1, 0, 0, 0],
        vec![1, 0, 0, -1,   2, 0, 0, 0,   0, 0, 0, -2],
        vec![0, 1, 0, -1,   0, 1, 0, 0,   0, 0, 0, -1],
        vec![0, -1, 0, 1,   0, 0, 0, r - 1,   0, -r + 1, 0, 0],
        vec![-1, 0, 0, 1,   0, 0, 0, r - 2,   -r + 2, 0, 0, 0],
        vec![1, 0, -1, 0,   r - 1, 0, 0, 0,   0, 0, -r + 1, 0],
        vec![0, 0, -1, 1,   0, 0, 0, r - 3,   0, 0, -r + 3, 0],
        vec![0, 1, -1, 0,   0, r - 2, 0, 0,   0, 0, -r + 2, 0],
        vec![-1, 1, 0, 0,   0, r - 1, 0, 0,   -r + 1, 0, 0, 0],
    ];
    Ok(RationalMatrix::from_i64(&rows))
}

/// The closed-form `f(r, λ)` coefficients, `c[i]` of `λ^i`.
pub fn closed_form_f(r: i64) -> Vec<BigInt> {
    let r = BigInt::from(r);
    let p = |cs: &[i64]| -> BigInt {
        // cs[k] is the coefficient of r^k
        cs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * &r + BigInt::from(c))
    };
    vec![
        BigInt::zero(),
        BigInt::zero(),
        p(&[0, 0, 60, -38, 6]),
        p(&[0, 412, -418, 143, -19, 1]),
        p(&[-152, 216, -210, 103, -21, 1]),
        p(&[132, 123, -241, 120, -26, 2]),
        p(&[-94, -99, 107, -30, 2]),
        p(&[113, -61, 15, -3, 1]),
        p(&[-68, 40, -6]),
        p(&[21, -19, 2]),
        p(&[0, 5, -1]),
        BigInt::from(-4),
        BigInt::one(),
    ]
}

/// Outcome of the comparison for one `r`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RankCheck {
    pub r: i64,
    pub rank: usize,
    pub nullity: usize,
    /// Coefficients of `λ^0..λ^12`, as decimal strings.
    pub charpoly: Vec<String>,
    pub matches_closed_form: bool,
    /// The `λ²` coefficient equals `2r²(r−3)(3r−10)`.
    pub lambda2_identity: bool,
    /// The nullspace is spanned by the two shift vectors.
    pub nullspace_is_shifts: bool,
}

pub fn rank_check(r: i64) -> Result<RankCheck, AlgebraError> {
    let m = build_matrix_m(r)?;
    let cp = charpoly(&m)?;
    let (rank, null) = rank_nullspace(&m);
    let ints: Vec<BigInt> = cp.iter().map(|c| c.to_integer()).collect();
    let closed = closed_form_f(r);
    let rr = BigInt::from(r);
    let l2 = BigInt::from(2) * &rr * &rr * (&rr - 3) * (BigInt::from(3) * &rr - 10);
    let shifts = [
        (0..12).map(|i| q(i64::from(i < 4))).collect::<Vec<_>>(),
        (0..12).map(|i| q(i64::from(i >= 4))).collect::<Vec<_>>(),
    ];
    Ok(RankCheck {
        r,
        rank,
        nullity: null.len(),
        charpoly: ints.iter().map(ToString::to_string).collect(),
        matches_closed_form: cp.iter().all(|c| c.is_integer()) && ints == closed,
        lambda2_identity: ints[2] == l2,
        nullspace_is_shifts: same_span(&null, &shifts),
    })
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    let to_m = |v: &[Vec<Q>]| RationalMatrix {
        rows: v.len(),
        cols: v.first().map_or(0, Vec::len),
        data: v.iter().flatten().cloned().collect(),
    };
    if a.is_empty() || b.is_empty() {
        return a.iter().chain(b).all(|v| v.iter().all(Zero::is_zero));
    }
    let both: Vec<Vec<Q>> = a.iter().chain(b).cloned().collect();
    let ra = rank(&to_m(a));
    ra == rank(&to_m(b)) && ra == rank(&to_m(&both))
}

/// The six equations of the three-line system; columns `y1..y3, m1..m3,
/// m′1..m′3`.
pub fn eq17_matrix() -> RationalMatrix {
    #[rustfmt::skip]
    let rows = vec![
        vec![1, -1, 0,   1, 0, 0,   0, -1, 0],
        vec![0, -1, 1,   0, 0, 2,   0, -2, 0],
        vec![-1, 0, 1,   0, 0, 1,   -1, 0, 0],
        vec![1, 0, -1,   2, 0, 0,   0, 0, -2],
        vec![0, 1, -1,   0, 1, 0,   0, 0, -1],
        vec![-1, 1, 0,   0, 2, 0,   -2, 0, 0],
    ];
    RationalMatrix::from_i64(&rows)
}

/// `(y, m, m′)` of the four-parameter crossing family.
pub fn eq3_vector(y: i64, m: i64, a: i64, b: i64) -> [i64; 9] {
    [
        y + 4 * a + 2 * b,
        y - 2 * a + 2 * b,
        y - 2 * a - 4 * b,
        m - 3 * a,
        m - 3 * b,
        m + 3 * a + 3 * b,
        m - 3 * a - 3 * b,
        m + 3 * a,
        m + 3 * b,
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Eq17Solution {
    pub dimension: usize,
    #[serde(serialize_with = "ser_vectors")]
    pub nullspace: Vec<Vec<Q>>,
    /// The partial derivatives of the family in `y, m, a, b` solve the system.
    pub family_in_nullspace: bool,
    /// ... and span the whole solution space.
    pub family_spans: bool,
}

fn ser_vectors<S: serde::Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.iter().map(|x| x.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
}

pub fn solve_eq17() -> Eq17Solution {
    let a = eq17_matrix();
    let (_, null) = rank_nullspace(&a);
    let gens: Vec<Vec<Q>> = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
        .iter()
        .map(|&(y, m, p, b)| eq3_vector(y, m, p, b).iter().map(|&x| q(x)).collect())
        .collect();
    let family_in_nullspace = gens.iter().all(|g| a.apply(g).iter().all(Zero::is_zero));
    Eq17Solution {
        dimension: null.len(),
        family_spans: family_in_nullspace && same_span(&null, &gens),
        nullspace: null,
        family_in_nullspace,
    }
}

/// Evaluates `Σ c[i] x^i`.
pub fn eval_poly(c: &[Q], x: &Q) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, ci| acc * x + ci)
}
