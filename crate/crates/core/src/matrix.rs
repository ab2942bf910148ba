//! Exact 3×3 and 2×2 matrices, unimodular wrappers, and unipotency certificates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, GaussianRational};
use crate::rational::Rational;

/// Dense 3×3 matrix over an exact field, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat3<T> {
    pub rows: [[T; 3]; 3],
}

pub type ExactMatrix3 = Mat3<Rational>;
pub type ComplexMatrix3 = Mat3<GaussianRational>;

impl<T: Field> Mat3<T> {
    pub fn new(rows: [[T; 3]; 3]) -> Self {
        Mat3 { rows }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Mat3 { rows: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))) }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Builds from nine entries in row-major order.
    pub fn from_row_major(entries: Vec<T>) -> Option<Self> {
        if entries.len() != 9 {
            return None;
        }
        let mut it = entries.into_iter();
        Some(Self::from_fn(|_, _| it.next().unwrap()))
    }

    pub fn row_major(&self) -> impl Iterator<Item = &T> {
        self.rows.iter().flatten()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i].clone())
    }

    pub fn trace(&self) -> T {
        self.rows[0][0].clone() + self.rows[1][1].clone() + self.rows[2][2].clone()
    }

    pub fn det(&self) -> T {
        let m = &self.rows;
        let minor = |a: usize, b: usize, c: usize, d: usize| m[1][a].clone() * m[2][b].clone() - m[1][c].clone() * m[2][d].clone();
        m[0][0].clone() * minor(1, 2, 2, 1) - m[0][1].clone() * minor(0, 2, 2, 0) + m[0][2].clone() * minor(0, 1, 1, 0)
    }

    /// Classical adjoint: `a · adj(a) = det(a) · I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.rows;
        let cofactor = |i: usize, j: usize| {
            let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let v = m[r[0]][c[0]].clone() * m[r[1]][c[1]].clone() - m[r[0]][c[1]].clone() * m[r[1]][c[0]].clone();
            if (i + j).is_multiple_of(2) {
                v
            } else {
                -v
            }
        };
        Self::from_fn(|i, j| cofactor(j, i))
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let inv = T::one() / d;
        Some(self.adjugate().scale(&inv))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(|i, j| self.rows[i][j].clone() * s.clone())
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| (0..3).fold(T::zero(), |acc, k| acc + self.rows[i][k].clone() * rhs.rows[k][j].clone()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::identity(), |acc, _| acc.mul_ref(self))
    }

    pub fn is_zero(&self) -> bool {
        self.row_major().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Coefficients `(c2, c1, c0)` of `λ³ + c2 λ² + c1 λ + c0 = det(λI − A)`.
    pub fn char_poly(&self) -> (T, T, T) {
        let t = self.trace();
        let t2 = self.mul_ref(self).trace();
        let half = T::one() / (T::one() + T::one());
        let c1 = (t.clone() * t.clone() - t2) * half;
        (-t, c1, -self.det())
    }

    /// Least `k ≥ 1` with `self^k = 0`, if the matrix is nilpotent.
    pub fn nilpotency_index(&self) -> Option<u8> {
        let mut p = self.clone();
        for k in 1..=3u8 {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul_ref(self);
        }
        None
    }

    /// Conjugate `g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &Self) -> Option<Self> {
        Some(g.inverse()?.mul_ref(self).mul_ref(g))
    }
}

impl ExactMatrix3 {
    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| Rational::from(rows[i][j]))
    }

    pub fn is_integral(&self) -> bool {
        self.row_major().all(Rational::is_integer)
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.rows[i][j].to_f64()))
    }
}

impl<T: Field> Mul for &Mat3<T> {
    type Output = Mat3<T>;
    fn mul(self, rhs: &Mat3<T>) -> Mat3<T> {
        self.mul_ref(rhs)
    }
}

impl<T: Field> Mul for Mat3<T> {
    type Output = Mat3<T>;
    fn mul(self, rhs: Mat3<T>) -> Mat3<T> {
        self.mul_ref(&rhs)
    }
}

impl<T: Field> Add for &Mat3<T> {
    type Output = Mat3<T>;
    fn add(self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.rows[i][j].clone() + rhs.rows[i][j].clone())
    }
}

impl<T: Field> Sub for &Mat3<T> {
    type Output = Mat3<T>;
    fn sub(self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.rows[i][j].clone() - rhs.rows[i][j].clone())
    }
}

impl<T: Field> Neg for &Mat3<T> {
    type Output = Mat3<T>;
    fn neg(self) -> Mat3<T> {
        Mat3::from_fn(|i, j| -self.rows[i][j].clone())
    }
}

impl<T: Field> fmt::Debug for Mat3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}, {}, {}", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

// Row-major length-9 array of entry strings.
impl<T: Field + Serialize> Serialize for Mat3<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.row_major())
    }
}

impl<'de, T: Field + Deserialize<'de>> Deserialize<'de> for Mat3<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<T>::deserialize(deserializer)?;
        let n = entries.len();
        Mat3::from_row_major(entries).ok_or_else(|| D::Error::custom(format!("expected 9 entries, found {n}")))
    }
}

/// A rational matrix with determinant exactly one.
///
/// The determinant is checked once at construction; products and inverses
/// stay unimodular.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SL3Matrix(ExactMatrix3);

impl SL3Matrix {
    pub fn new(m: ExactMatrix3) -> Result<Self> {
        let d = m.det();
        if d == 1 {
            Ok(SL3Matrix(m))
        } else {
            Err(Error::NotUnimodular(d.to_string()))
        }
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(ExactMatrix3::from_i64(rows))
    }

    pub fn identity() -> Self {
        SL3Matrix(ExactMatrix3::identity())
    }

    /// The principal unipotent Jordan block.
    pub fn jordan_block() -> Self {
        SL3Matrix(ExactMatrix3::from_i64([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))
    }

    /// Unipotent with a single 2×2 Jordan block.
    pub fn jordan_block_minor() -> Self {
        SL3Matrix(ExactMatrix3::from_i64([[1, 0, 0], [0, 1, 1], [0, 0, 1]]))
    }

    pub fn matrix(&self) -> &ExactMatrix3 {
        &self.0
    }

    pub fn into_matrix(self) -> ExactMatrix3 {
        self.0
    }

    pub fn multiply(&self, rhs: &SL3Matrix) -> SL3Matrix {
        SL3Matrix(self.0.mul_ref(&rhs.0))
    }

    /// The adjugate, which is the inverse since `det = 1`.
    pub fn inverse(&self) -> SL3Matrix {
        SL3Matrix(self.0.adjugate())
    }

    pub fn trace(&self) -> Rational {
        self.0.trace()
    }

    /// `tr A = tr A² = 3`, equivalently characteristic polynomial `(λ − 1)³`.
    pub fn is_unipotent(&self) -> bool {
        self.0.trace() == 3 && self.0.mul_ref(&self.0).trace() == 3
    }

    /// Least `k` with `(A − I)^k = 0`.
    pub fn unipotency_index(&self) -> Result<u8> {
        if !self.is_unipotent() {
            return Err(Error::NotUnipotent("matrix"));
        }
        let n = &self.0 - &ExactMatrix3::identity();
        // Unipotent means A - I is nilpotent, so the index is at most 3.
        Ok(n.nilpotency_index().expect("unipotent matrix minus identity is nilpotent"))
    }

    pub fn conjugate_by(&self, g: &ExactMatrix3) -> Result<SL3Matrix> {
        self.0.conjugate_by(g).map(SL3Matrix).ok_or(Error::Singular)
    }

    pub fn is_integral(&self) -> bool {
        self.0.is_integral()
    }
}

impl fmt::Debug for SL3Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl<'de> Deserialize<'de> for SL3Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ExactMatrix3::deserialize(deserializer)?;
        SL3Matrix::new(m).map_err(D::Error::custom)
    }
}

/// 2×2 rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Mat2 {
    pub rows: [[Rational; 2]; 2],
}

impl Mat2 {
    pub fn new(rows: [[Rational; 2]; 2]) -> Self {
        Mat2 { rows }
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Self {
        Mat2 { rows: std::array::from_fn(|i| std::array::from_fn(|j| Rational::from(rows[i][j]))) }
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> Rational {
        let m = &self.rows;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn mul_ref(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| &self.rows[i][0] * &rhs.rows[0][j] + &self.rows[i][1] * &rhs.rows[1][j])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn diag(a: &str, b: &str, c: &str) -> ExactMatrix3 {
        let z = Rational::zero;
        ExactMatrix3::new([[q(a), z(), z()], [z(), q(b), z()], [z(), z(), q(c)]])
    }

    #[test]
    fn identity_products() {
        let i = SL3Matrix::identity();
        assert_eq!(i.multiply(&i), i);
        let a1 = SL3Matrix::jordan_block();
        assert_eq!(a1.multiply(&a1.inverse()), i);
    }

    #[test]
    fn jordan_inverse_entries() {
        let inv = SL3Matrix::jordan_block().inverse();
        assert_eq!(inv.matrix(), &ExactMatrix3::from_i64([[1, -1, 1], [0, 1, -1], [0, 0, 1]]));
    }

    #[test]
    fn char_poly_examples() {
        let unip = (q("-3"), q("3"), q("-1"));
        assert_eq!(ExactMatrix3::identity().char_poly(), unip);
        assert_eq!(SL3Matrix::jordan_block().matrix().char_poly(), unip);
        assert_eq!(diag("2", "1", "1/2").char_poly(), (q("-7/2"), q("7/2"), q("-1")));
    }

    #[test]
    fn unipotency() {
        assert!(SL3Matrix::jordan_block().is_unipotent());
        let d = SL3Matrix::new(diag("2", "1", "1/2")).unwrap();
        assert!(!d.is_unipotent());
        assert!(d.unipotency_index().is_err());
        assert_eq!(SL3Matrix::identity().unipotency_index().unwrap(), 1);
        assert_eq!(SL3Matrix::jordan_block_minor().unipotency_index().unwrap(), 2);
        assert_eq!(SL3Matrix::jordan_block().unipotency_index().unwrap(), 3);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(SL3Matrix::new(diag("2", "1", "1")), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn json_row_major() {
        let a = SL3Matrix::jordan_block();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["1","1","0","0","1","1","0","0","1"]"#);
        let back: SL3Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<SL3Matrix>(r#"["2","0","0","0","1","0","0","0","1"]"#).is_err());
        assert!(serde_json::from_str::<ExactMatrix3>(r#"["1","0"]"#).is_err());
    }

    #[test]
    fn adjugate_identity() {
        let m = ExactMatrix3::from_i64([[2, -1, 3], [0, 4, 5], [7, 1, -2]]);
        assert_eq!(m.mul_ref(&m.adjugate()), ExactMatrix3::identity().scale(&m.det()));
        assert!(ExactMatrix3::from_i64([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).inverse().is_none());
    }
}
