//! Exact rational arithmetic and dense linear algebra over the rationals.
//!
//! Every quantity in this crate (multiplicities, thresholds, log
//! discrepancies) is a [`Rational`]. There is no floating point anywhere on
//! the computation path; [`Rational::approx`] exists only for labelled
//! display output.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ExactError;

/// An arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Nearest `f64`, for display behind an explicit approximation flag only.
    pub fn approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::ParseRational(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => {
                let n: BigInt = t.parse().map_err(|_| bad())?;
                Ok(Rational::from_int(n))
            }
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(p, q))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        // Accept bare JSON integers as well as "p/q" strings.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Ok(Rational::from_int(n)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// A rational vector indexed by curve id.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector(vec![Rational::zero(); n])
    }

    /// The `i`-th standard basis vector scaled by `scale`.
    pub fn basis(n: usize, i: usize, scale: impl Into<Rational>) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = scale.into();
        v
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(xs: I) -> Self {
        QVector(xs.into_iter().map(Rational::from_int).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Coefficientwise `self <= other`.
    pub fn le(&self, other: &QVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Dense square rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    /// Builds a matrix from integer rows. Panics if the rows are not square.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix rows must be square");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Rational::from_int(x);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, x: &QVector) -> QVector {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        QVector(
            (0..self.n)
                .map(|i| (0..self.n).map(|j| &self[(i, j)] * &x[j]).sum())
                .collect(),
        )
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    /// Principal submatrix on the given index set, in the given order.
    pub fn principal_submatrix(&self, idx: &[usize]) -> QMatrix {
        let mut m = QMatrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.n + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Clears denominators row by row, producing an integer matrix with `extra`
/// trailing columns taken from `rhs`.
fn integer_augmented(m: &QMatrix, rhs: &[&QVector]) -> Vec<Vec<BigInt>> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            let row: Vec<&Rational> = (0..n)
                .map(|j| &m[(i, j)])
                .chain(rhs.iter().map(|b| &b[i]))
                .collect();
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.into_iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect()
}

/// One fraction-free (Bareiss) elimination step on column `k`, using row `k`
/// as pivot row and `prev` as the previous pivot. Exact division is
/// guaranteed by Sylvester's identity.
fn bareiss_step(a: &mut [Vec<BigInt>], k: usize, prev: &BigInt) {
    let width = a[k].len();
    let (top, rest) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    for row in rest.iter_mut() {
        let factor = row[k].clone();
        for j in (k + 1)..width {
            let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
            row[j] = v / prev;
        }
        row[k] = BigInt::zero();
    }
}

/// Solves `m · x = b` exactly by fraction-free elimination.
pub fn solve_symmetric(m: &QMatrix, b: &QVector) -> Result<QVector, ExactError> {
    let n = m.dim();
    if b.len() != n {
        return Err(ExactError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut a = integer_augmented(m, &[b]);
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => a.swap(k, r),
                None => return Err(ExactError::SingularMatrix { column: k }),
            }
        }
        bareiss_step(&mut a, k, &prev);
        prev = a[k][k].clone();
    }
    // Back substitution on the upper-triangular integer system.
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_int(a[i][n].clone());
        for j in (i + 1)..n {
            acc = acc - Rational::from_int(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_int(a[i][i].clone());
    }
    Ok(QVector(x))
}

/// Leading principal minors of a square matrix, computed fraction-free.
///
/// Without row exchanges the `k`-th Bareiss pivot is exactly the `k`-th
/// leading minor; a zero pivot means that minor vanishes and every later
/// entry is reported as zero.
pub fn leading_minors(m: &QMatrix) -> Vec<Rational> {
    let n = m.dim();
    // Row scaling changes minors, so clear denominators globally instead.
    let l = m
        .entries
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = &m[(i, j)];
                    x.numer() * (&l / x.denom())
                })
                .collect()
        })
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            minors.resize(n, Rational::zero());
            break;
        }
        // scaled minor = l^(k+1) · true minor
        minors.push(Rational::new(
            pivot.clone(),
            num_traits::pow(l.clone(), k + 1),
        ));
        bareiss_step(&mut a, k, &prev);
        prev = pivot;
    }
    minors
}

/// Sylvester's criterion: leading minors alternate in sign starting negative.
pub fn is_negative_definite(m: &QMatrix) -> bool {
    leading_minors(m).iter().enumerate().all(|(k, d)| {
        if k % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Rational::new(6, 4).to_string(), "3/2");
        assert_eq!(Rational::new(-6, -3).to_string(), "2");
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
        assert_eq!(q("10/4"), Rational::new(5, 2));
        assert_eq!(q(" -7 "), Rational::from_int(-7));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let v = QVector(vec![q("1/3"), q("2")]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/3","2"]"#);
        let back: QVector = serde_json::from_str(r#"["1/3", 2]"#).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn solve_one_by_one() {
        let m = QMatrix::from_int_rows(&[vec![-1]]);
        let x = solve_symmetric(&m, &QVector::from_ints([-1])).unwrap();
        assert_eq!(x, QVector::from_ints([1]));
    }

    #[test]
    fn solve_two_by_two() {
        let m = QMatrix::from_int_rows(&[vec![-2, 1], vec![1, -1]]);
        let x = solve_symmetric(&m, &QVector::from_ints([-1, 0])).unwrap();
        assert_eq!(x, QVector::from_ints([1, 1]));
        assert_eq!(m.mul_vec(&x), QVector::from_ints([-1, 0]));
    }

    #[test]
    fn solve_example_two_r3() {
        let m = QMatrix::from_int_rows(&[vec![-3, 0, 1], vec![0, -2, 1], vec![1, 1, -1]]);
        let x = solve_symmetric(&m, &QVector::from_ints([0, 0, -1])).unwrap();
        assert_eq!(x, QVector::from_ints([2, 3, 6]));
        let x = solve_symmetric(&m, &QVector(vec![q("0"), q("0"), q("-1/6")])).unwrap();
        assert_eq!(x, QVector(vec![q("1/3"), q("1/2"), q("1")]));
    }

    #[test]
    fn solve_needs_row_exchange() {
        let m = QMatrix::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        let x = solve_symmetric(&m, &QVector::from_ints([2, 3])).unwrap();
        assert_eq!(x, QVector::from_ints([3, 2]));
    }

    #[test]
    fn singular_is_reported() {
        let m = QMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(matches!(
            solve_symmetric(&m, &QVector::from_ints([1, 1])),
            Err(ExactError::SingularMatrix { column: 1 })
        ));
    }

    #[test]
    fn definiteness() {
        assert!(is_negative_definite(&QMatrix::from_int_rows(&[vec![-1]])));
        assert!(is_negative_definite(&QMatrix::from_int_rows(&[
            vec![-2, 1],
            vec![1, -2]
        ])));
        assert!(!is_negative_definite(&QMatrix::from_int_rows(&[vec![0]])));
        assert!(!is_negative_definite(&QMatrix::from_int_rows(&[
            vec![-1, 2],
            vec![2, -1]
        ])));
        assert_eq!(
            leading_minors(&QMatrix::from_int_rows(&[vec![-2, 1], vec![1, -2]])),
            vec![Rational::from_int(-2), Rational::from_int(3)]
        );
    }

    #[test]
    fn minors_of_rational_matrix() {
        let mut m = QMatrix::zeros(2);
        m[(0, 0)] = q("-1/2");
        m[(0, 1)] = q("1/3");
        m[(1, 0)] = q("1/3");
        m[(1, 1)] = q("-1");
        // det = 1/2 - 1/9 = 7/18
        assert_eq!(leading_minors(&m), vec![q("-1/2"), q("7/18")]);
    }

    /// Negative definite test matrices: -(B^T B + I) for small integer B.
    fn neg_def(n: usize, b: &[i64]) -> QMatrix {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let s: i64 = (0..n).map(|k| b[k * n + i] * b[k * n + j]).sum();
                rows[i][j] = -(s + i64::from(i == j));
            }
        }
        QMatrix::from_int_rows(&rows)
    }

    proptest! {
        #[test]
        fn solve_round_trips(
            n in 1usize..6,
            b in proptest::collection::vec(-3i64..4, 36),
            x in proptest::collection::vec(-5i64..6, 6),
        ) {
            let m = neg_def(n, &b);
            prop_assert!(m.is_symmetric());
            prop_assert!(is_negative_definite(&m));
            let x = QVector::from_ints(x[..n].iter().copied());
            let rhs = m.mul_vec(&x);
            prop_assert_eq!(solve_symmetric(&m, &rhs).unwrap(), x);
        }
    }
}
