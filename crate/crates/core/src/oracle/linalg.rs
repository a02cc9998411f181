//! Exact integer and rational linear algebra.
//!
//! Ranks use fraction-free row reduction with gcd normalization. The
//! reduction runs in `i128` with checked arithmetic and restarts in
//! `BigInt` if anything overflows, so results are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

mod exact {
    use super::*;

    /// Integer arithmetic where every operation may refuse (overflow).
    pub(super) trait ExactInt: Clone + PartialEq + Sized {
        fn zero() -> Self;
        fn is_zero(&self) -> bool;
        fn mul(&self, other: &Self) -> Option<Self>;
        fn sub(&self, other: &Self) -> Option<Self>;
        fn gcd(&self, other: &Self) -> Self;
        fn div_exact(&self, other: &Self) -> Self;
        fn is_one(&self) -> bool;
    }

    impl ExactInt for i128 {
        fn zero() -> Self {
            0
        }
        fn is_zero(&self) -> bool {
            *self == 0
        }
        fn mul(&self, other: &Self) -> Option<Self> {
            self.checked_mul(*other)
        }
        fn sub(&self, other: &Self) -> Option<Self> {
            self.checked_sub(*other)
        }
        fn gcd(&self, other: &Self) -> Self {
            Integer::gcd(self, other)
        }
        fn div_exact(&self, other: &Self) -> Self {
            self / other
        }
        fn is_one(&self) -> bool {
            *self == 1
        }
    }

    impl ExactInt for BigInt {
        fn zero() -> Self {
            Zero::zero()
        }
        fn is_zero(&self) -> bool {
            Zero::is_zero(self)
        }
        fn mul(&self, other: &Self) -> Option<Self> {
            Some(self * other)
        }
        fn sub(&self, other: &Self) -> Option<Self> {
            Some(self - other)
        }
        fn gcd(&self, other: &Self) -> Self {
            Integer::gcd(self, other)
        }
        fn div_exact(&self, other: &Self) -> Self {
            self / other
        }
        fn is_one(&self) -> bool {
            One::is_one(self)
        }
    }

    /// Echelon basis grown one row at a time.
    struct Echelon<T> {
        basis: Vec<(usize, Vec<T>)>,
    }

    impl<T: ExactInt> Echelon<T> {
        fn new() -> Self {
            Echelon { basis: Vec::new() }
        }

        /// Reduces `v` against the basis; keeps it if independent. `None` on overflow.
        fn push(&mut self, mut v: Vec<T>) -> Option<bool> {
            for (p, b) in &self.basis {
                if v[*p].is_zero() {
                    continue;
                }
                let (bp, vp) = (b[*p].clone(), v[*p].clone());
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.mul(&bp)?.sub(&y.mul(&vp)?)?;
                }
                normalize(&mut v);
            }
            match v.iter().position(|x| !x.is_zero()) {
                Some(p) => {
                    self.basis.push((p, v));
                    Some(true)
                }
                None => Some(false),
            }
        }
    }

    fn normalize<T: ExactInt>(v: &mut [T]) {
        let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in v.iter_mut() {
                *x = x.div_exact(&g);
            }
        }
    }

    pub(super) fn rank_with<T: ExactInt>(
        rows: &mut dyn Iterator<Item = Vec<T>>,
        cap: usize,
    ) -> Option<usize> {
        let mut e = Echelon::<T>::new();
        for row in rows {
            if e.basis.len() >= cap {
                break;
            }
            e.push(row)?;
        }
        Some(e.basis.len())
    }
}

use exact::rank_with;

/// Rank of a set of integer rows, stopping early once `cap` is reached.
pub fn rank_capped<'a, I>(rows: I, cap: usize) -> usize
where
    I: IntoIterator<Item = &'a [i64]> + Clone,
{
    let mut small = rows
        .clone()
        .into_iter()
        .map(|r| r.iter().map(|&x| x as i128).collect::<Vec<i128>>());
    if let Some(r) = rank_with::<i128>(&mut small, cap) {
        return r;
    }
    let mut big = rows
        .into_iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect::<Vec<BigInt>>());
    rank_with::<BigInt>(&mut big, cap).expect("BigInt arithmetic does not overflow")
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl ExactMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        ExactMatrix { rows, cols }
    }

    pub fn from_i64(rows: &[Vec<i64>], cols: usize) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        let mut it = self.rows.iter().cloned();
        rank_with::<BigInt>(&mut it, usize::MAX).expect("BigInt arithmetic does not overflow")
    }

    /// Bareiss determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        let n = self.rows.len();
        assert_eq!(n, self.cols, "determinant needs a square matrix");
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

/// Reduced row echelon form over the rationals; returns the nonzero rows
/// and their pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
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
                let (pivot_row, other) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in other.iter_mut().zip(pivot_row) {
                    *x = &*x - &f * y;
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

/// Scales a rational vector to the primitive integer vector with the
/// same direction.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_rational(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

pub fn abs_sum(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}
