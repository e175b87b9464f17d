//! Integer lattice vectors and the exact integer linear algebra the cone
//! machinery is built on: kernels, Hermite normal forms, ranks and integer
//! solves. Everything works on `i128` internally and narrows back to `i64`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ToricError};

/// An element of `N` or `M`, stored as integer coordinates in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    /// The `i`-th standard basis vector of `Z^rank`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divides out the content. `None` for the zero vector.
    pub fn primitive(&self) -> Option<LatticeVector> {
        let g = self.content();
        if g == 0 {
            return None;
        }
        Some(LatticeVector(self.0.iter().map(|c| c / g).collect()))
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    /// Flips the sign so that the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> LatticeVector {
        match self.0.iter().find(|&&c| c != 0) {
            Some(&c) if c < 0 => -self,
            _ => self.clone(),
        }
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn to_wide(&self) -> Vec<i128> {
        self.0.iter().map(|&c| c as i128).collect()
    }

    pub(crate) fn from_wide(coords: &[i128]) -> LatticeVector {
        LatticeVector(coords.iter().map(|&c| narrow(c)).collect())
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

pub(crate) fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("lattice coordinate overflowed i64")
}

/// `⟨u, v⟩ = Σ u_i v_i`.
pub fn pairing(u: &LatticeVector, v: &LatticeVector) -> Result<i64> {
    check_rank(v, u.rank())?;
    Ok(u.dot(v))
}

pub(crate) fn check_rank(v: &LatticeVector, rank: usize) -> Result<()> {
    if v.rank() != rank {
        return Err(ToricError::Dimension {
            expected: rank,
            found: v.rank(),
        });
    }
    Ok(())
}

pub(crate) fn check_ranks<'a>(
    vs: impl IntoIterator<Item = &'a LatticeVector>,
    rank: usize,
) -> Result<()> {
    vs.into_iter().try_for_each(|v| check_rank(v, rank))
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with g = x a + y b, g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Column echelon form of an `rows × cols` matrix by unimodular column
/// operations. Returns `(E, U, r)` with `A·U = E`, where the first `r` columns
/// of `E` are in echelon form and the remaining columns are zero.
fn column_echelon(a: &[Vec<i128>], cols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, usize) {
    let mut e: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot = 0usize;
    for row in 0..e.len() {
        if pivot == cols {
            break;
        }
        for j in pivot + 1..cols {
            let b = e[row][j];
            if b == 0 {
                continue;
            }
            let a = e[row][pivot];
            if a == 0 {
                swap_cols(&mut e, pivot, j);
                swap_cols(&mut u, pivot, j);
                continue;
            }
            let (g, x, y) = ext_gcd(a, b);
            let (p, q) = (-b / g, a / g);
            combine_cols(&mut e, pivot, j, x, y, p, q);
            combine_cols(&mut u, pivot, j, x, y, p, q);
        }
        if e[row][pivot] != 0 {
            if e[row][pivot] < 0 {
                negate_col(&mut e, pivot);
                negate_col(&mut u, pivot);
            }
            pivot += 1;
        }
    }
    (e, u, pivot)
}

fn swap_cols(m: &mut [Vec<i128>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn negate_col(m: &mut [Vec<i128>], i: usize) {
    for row in m.iter_mut() {
        row[i] = -row[i];
    }
}

// (col_i, col_j) <- (x col_i + y col_j, p col_i + q col_j)
fn combine_cols(m: &mut [Vec<i128>], i: usize, j: usize, x: i128, y: i128, p: i128, q: i128) {
    for row in m.iter_mut() {
        let (ci, cj) = (row[i], row[j]);
        row[i] = x * ci + y * cj;
        row[j] = p * ci + q * cj;
    }
}

/// Row Hermite normal form: rows in echelon form with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows dropped.
fn row_hermite(rows: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    let mut h: Vec<Vec<i128>> = rows.iter().filter(|r| r.iter().any(|&c| c != 0)).cloned().collect();
    let mut k = 0usize;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if k == h.len() {
            break;
        }
        for i in k + 1..h.len() {
            let b = h[i][col];
            if b == 0 {
                continue;
            }
            let a = h[k][col];
            if a == 0 {
                h.swap(k, i);
                continue;
            }
            let (g, x, y) = ext_gcd(a, b);
            let (p, q) = (-b / g, a / g);
            let rk = h[k].clone();
            let ri = h[i].clone();
            for c in 0..cols {
                h[k][c] = x * rk[c] + y * ri[c];
                h[i][c] = p * rk[c] + q * ri[c];
            }
        }
        if h[k][col] == 0 {
            continue;
        }
        if h[k][col] < 0 {
            for c in h[k].iter_mut() {
                *c = -*c;
            }
        }
        let d = h[k][col];
        for i in 0..k {
            let q = Integer::div_floor(&h[i][col], &d);
            if q != 0 {
                for c in 0..cols {
                    h[i][c] -= q * h[k][c];
                }
            }
        }
        pivots.push(col);
        k += 1;
    }
    h.truncate(k);
    h
}

/// Canonical basis (Hermite normal form rows, sorted) of the lattice spanned
/// by `vectors` inside `Z^rank`.
pub fn hermite_basis(vectors: &[LatticeVector], rank: usize) -> Result<Vec<LatticeVector>> {
    check_ranks(vectors, rank)?;
    let rows: Vec<Vec<i128>> = vectors.iter().map(LatticeVector::to_wide).collect();
    let mut out: Vec<LatticeVector> = row_hermite(&rows, rank)
        .iter()
        .map(|r| LatticeVector::from_wide(r))
        .collect();
    out.sort();
    Ok(out)
}

/// Basis of the saturated lattice `{x ∈ Z^rank : ⟨row, x⟩ = 0 ∀ row}`,
/// canonically normalized (Hermite form, first nonzero coordinate positive,
/// sorted). Empty when the kernel is trivial.
pub fn integer_kernel_basis(rows: &[LatticeVector], rank: usize) -> Result<Vec<LatticeVector>> {
    check_ranks(rows, rank)?;
    let a: Vec<Vec<i128>> = rows.iter().map(LatticeVector::to_wide).collect();
    let (_, u, r) = column_echelon(&a, rank);
    let kernel: Vec<LatticeVector> = (r..rank)
        .map(|j| LatticeVector::from_wide(&u.iter().map(|row| row[j]).collect::<Vec<_>>()))
        .collect();
    hermite_basis(&kernel, rank)
}

/// Canonical basis of `span_Q(vectors) ∩ Z^rank`.
pub fn saturated_basis(vectors: &[LatticeVector], rank: usize) -> Result<Vec<LatticeVector>> {
    let perp = integer_kernel_basis(vectors, rank)?;
    integer_kernel_basis(&perp, rank)
}

/// Rank over `Q` of a list of integer vectors.
pub fn rank_of(vectors: &[LatticeVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let rows: Vec<Vec<i128>> = vectors.iter().map(LatticeVector::to_wide).collect();
    wide_rank(rows, first.rank())
}

pub(crate) fn wide_rank(mut rows: Vec<Vec<i128>>, cols: usize) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let b = row[col];
            if b == 0 {
                continue;
            }
            let a = pivot_row[col];
            let mut g = 0i128;
            for c in 0..cols {
                row[c] = a * row[c] - b * pivot_row[c];
                g = g.gcd(&row[c]);
            }
            if g > 1 {
                row.iter_mut().for_each(|c| *c /= g);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Integer solution `k` of `Σ k_j columns[j] = target`, if one exists.
///
/// The solution set is a coset of the integer kernel lattice; the returned
/// representative is reduced against the Hermite basis of that kernel, so the
/// answer does not depend on elimination order.
pub fn solve_integer(columns: &[LatticeVector], target: &LatticeVector) -> Result<Option<Vec<i64>>> {
    let n = target.rank();
    check_ranks(columns, n)?;
    let m = columns.len();
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| columns.iter().map(|c| c.coords()[i] as i128).collect())
        .collect();
    let (e, u, r) = column_echelon(&a, m);
    let w = target.to_wide();
    let mut y = vec![0i128; m];
    let mut col = 0usize;
    for row in 0..n {
        if col < r && e[row][col] != 0 {
            let partial: i128 = (0..col).map(|c| e[row][c] * y[c]).sum();
            let rest = w[row] - partial;
            if rest % e[row][col] != 0 {
                return Ok(None);
            }
            y[col] = rest / e[row][col];
            col += 1;
        }
    }
    for row in 0..n {
        let lhs: i128 = (0..r).map(|c| e[row][c] * y[c]).sum();
        if lhs != w[row] {
            return Ok(None);
        }
    }
    let mut k: Vec<i128> = (0..m).map(|i| (0..m).map(|j| u[i][j] * y[j]).sum()).collect();
    let kernel: Vec<Vec<i128>> = (r..m).map(|j| u.iter().map(|row| row[j]).collect()).collect();
    for h in row_hermite(&kernel, m) {
        let pc = h.iter().position(|&c| c != 0).expect("hermite rows are nonzero");
        let q = Integer::div_floor(&k[pc], &h[pc]);
        if q != 0 {
            for (kc, hc) in k.iter_mut().zip(&h) {
                *kc -= q * hc;
            }
        }
    }
    Ok(Some(k.into_iter().map(narrow).collect()))
}

/// Coordinates of `target` in a `Q`-basis given as vectors. `None` when the
/// basis is linearly dependent or does not span `target`.
pub fn rational_coordinates(basis: &[LatticeVector], target: &LatticeVector) -> Option<Vec<BigRational>> {
    let n = target.rank();
    let m = basis.len();
    if basis.iter().any(|b| b.rank() != n) {
        return None;
    }
    // augmented n × (m+1) system
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| rat(b.coords()[i])).collect();
            row.push(rat(target.coords()[i]));
            row
        })
        .collect();
    let mut pivot_row = 0usize;
    let mut pivot_cols = Vec::with_capacity(m);
    for col in 0..m {
        let p = (pivot_row..n).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for c in col..=m {
            rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
        }
        for i in 0..n {
            if i != pivot_row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..=m {
                    let delta = &f * &rows[pivot_row][c];
                    rows[i][c] = &rows[i][c] - delta;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[m].is_zero()) {
        return None;
    }
    Some((0..m).map(|i| rows[i][m].clone()).collect())
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}
