//! Representations of the thrice-punctured sphere group with unipotent
//! boundary monodromy: the character map, its explicit inverse, normal forms
//! and the uniformization representation.
//!
//! A representation is stored as the generator pair `(a1, a2)`; the third
//! boundary generator is `(a2 · a1)⁻¹`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::nullspace;
use crate::matrix::{ExactMatrix3, Mat2, SL3Matrix};
use crate::rational::Rational;
use crate::surface::{lawton_eval, on_surface, CharacterPoint};

/// Generator pair with all three boundary generators unipotent.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RepPair {
    a1: SL3Matrix,
    a2: SL3Matrix,
}

impl RepPair {
    pub fn new(a1: SL3Matrix, a2: SL3Matrix) -> Result<Self> {
        if !a1.is_unipotent() {
            return Err(Error::NotUnipotent("a1"));
        }
        if !a2.is_unipotent() {
            return Err(Error::NotUnipotent("a2"));
        }
        // (a2 a1)^-1 is unipotent iff a2 a1 is.
        if !a2.multiply(&a1).is_unipotent() {
            return Err(Error::NotUnipotent("(a2 a1)^-1"));
        }
        Ok(RepPair { a1, a2 })
    }

    pub fn trivial() -> Self {
        RepPair { a1: SL3Matrix::identity(), a2: SL3Matrix::identity() }
    }

    pub fn a1(&self) -> &SL3Matrix {
        &self.a1
    }

    pub fn a2(&self) -> &SL3Matrix {
        &self.a2
    }

    /// `ρ(γ₃) = (ρ(γ₂) ρ(γ₁))⁻¹`.
    pub fn a3(&self) -> SL3Matrix {
        self.a2.multiply(&self.a1).inverse()
    }

    /// `(g⁻¹ a1 g, g⁻¹ a2 g)`.
    pub fn conjugate_by(&self, g: &ExactMatrix3) -> Result<RepPair> {
        Ok(RepPair { a1: self.a1.conjugate_by(g)?, a2: self.a2.conjugate_by(g)? })
    }

    pub fn is_integral(&self) -> bool {
        self.a1.is_integral() && self.a2.is_integral()
    }
}

impl<'de> Deserialize<'de> for RepPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a1: SL3Matrix,
            a2: SL3Matrix,
        }
        let raw = Raw::deserialize(deserializer)?;
        RepPair::new(raw.a1, raw.a2).map_err(serde::de::Error::custom)
    }
}

/// `(tr(a1 a2⁻¹), tr(a1⁻¹ a2), tr(a1 a2 a1⁻¹ a2⁻¹))`.
pub fn character_map(r: &RepPair) -> CharacterPoint {
    let (a1, a2) = (r.a1.matrix(), r.a2.matrix());
    let a1_inv = r.a1.inverse();
    let a2_inv = r.a2.inverse();
    let (a1_inv, a2_inv) = (a1_inv.matrix(), a2_inv.matrix());
    CharacterPoint {
        x: a1.mul_ref(a2_inv).trace(),
        y: a1_inv.mul_ref(a2).trace(),
        z: a1.mul_ref(a2).mul_ref(a1_inv).mul_ref(a2_inv).trace(),
    }
}

/// Irreducible iff the character differs from the singular point `(3, 3, 3)`.
pub fn is_irreducible(r: &RepPair) -> bool {
    character_map(r) != CharacterPoint::from_i64(3, 3, 3)
}

pub fn is_integral(r: &RepPair) -> bool {
    r.is_integral()
}

/// Which explicit inverse of the character map applies at a point.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum NormalFormCase {
    /// `y ≠ 3`.
    Generic,
    /// `y = 3`, `x ≠ 3`; parametrized by `b21`.
    Degenerate,
    /// `x = y = 3`, the trivial representation.
    Trivial,
}

pub fn normal_form_case(p: &CharacterPoint) -> NormalFormCase {
    if p.y != 3 {
        NormalFormCase::Generic
    } else if p.x != 3 {
        NormalFormCase::Degenerate
    } else {
        NormalFormCase::Trivial
    }
}

/// Second generator in normal form for `y ≠ 3` (first generator the Jordan block).
pub fn generic_normal_form(p: &CharacterPoint) -> ExactMatrix3 {
    let (x, y, z) = (&p.x, &p.y, &p.z);
    let d = y - 3;
    assert!(!d.is_zero(), "generic normal form needs y != 3");
    let d2 = &d * &d;
    let d3 = &d2 * &d;
    let xm3 = x - 3;
    let zero = Rational::zero();
    let e01 = (x * 3 + y * 3 + z - 21) / &d2;
    let e02 = -(Rational::from(63) + x * x - x * 15 - y * 27 + x * y * 3 + y * y * 3) / &d3;
    let e11 = -(&xm3 / &d);
    let e12 = (Rational::from(30) - x * 6 - y * 6 + x * y - z) / &d2;
    let e22 = &xm3 / &d + 3;
    ExactMatrix3::new([[zero.clone(), e01, e02], [zero.clone(), e11, e12], [d, zero, e22]])
}

/// Second generator in normal form for `y = 3`, given `b21 ≠ 0`.
pub fn degenerate_normal_form(b21: &Rational) -> ExactMatrix3 {
    assert!(!b21.is_zero(), "b21 must be nonzero");
    let b = b21;
    let zero = Rational::zero();
    let e01 = Rational::from(3) - Rational::from(3) / b - b;
    let bm1 = b - 1;
    let e02 = &bm1 * &bm1 * &bm1 / (b * b);
    ExactMatrix3::new([[zero.clone(), e01, e02], [b.clone(), Rational::from(3) - b, zero.clone()], [zero, -b, b.clone()]])
}

/// `b21` for a point with `y = 3, x ≠ 3`, checked against `b21² = 3 − x`.
pub fn degenerate_parameter(p: &CharacterPoint) -> Result<Rational> {
    let denom = Rational::from(3) - &p.x;
    if denom.is_zero() {
        return Err(Error::Unsupported("degenerate case needs x != 3".into()));
    }
    let b21 = (Rational::from(12) - &p.x * 3 - &p.z) / &denom;
    if &b21 * &b21 != denom {
        return Err(Error::NotInField(format!("b21 = {b21} does not satisfy b21^2 = 3 - x = {denom}")));
    }
    Ok(b21)
}

/// A representation with the given character, first generator the Jordan block
/// (identity pair at `(3, 3, 3)`).
pub fn invert_character(p: &CharacterPoint) -> Result<RepPair> {
    if !on_surface(p) {
        return Err(Error::OffSurface(lawton_eval(p).to_string()));
    }
    let a2 = match normal_form_case(p) {
        NormalFormCase::Trivial => return Ok(RepPair::trivial()),
        NormalFormCase::Generic => generic_normal_form(p),
        NormalFormCase::Degenerate => degenerate_normal_form(&degenerate_parameter(p)?),
    };
    let pair = RepPair::new(SL3Matrix::jordan_block(), SL3Matrix::new(a2)?)?;
    // z is one of two roots of P(x, y, .); the trace identity picks it out.
    let chi = character_map(&pair);
    if chi != *p {
        return Err(Error::OffSurface(format!("reconstructed character {chi} differs from {p}")));
    }
    Ok(pair)
}

/// Result of conjugating an irreducible pair into normal form.
#[derive(Clone, Debug, Serialize)]
pub struct NormalForm {
    pub case: NormalFormCase,
    pub b21: Option<Rational>,
    /// `g` with `g⁻¹ a1 g = A₁` and `g⁻¹ a2 g` the normal form. Only defined
    /// up to scale; fixed by making the first nonzero entry of its first
    /// column equal to one.
    pub conjugator: ExactMatrix3,
    pub normalized: RepPair,
}

/// Linear conditions `m g − g n = 0` on the row-major entries of `g`.
fn intertwiner_rows(m: &ExactMatrix3, n: &ExactMatrix3) -> Vec<Vec<Rational>> {
    let mut rows = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let mut row = vec![Rational::zero(); 9];
            for k in 0..3 {
                row[3 * k + j] += m.get(i, k);
                row[3 * i + k] -= n.get(k, j);
            }
            rows.push(row);
        }
    }
    rows
}

pub fn normalize_pair(r: &RepPair) -> Result<NormalForm> {
    let index = r.a1.unipotency_index()?;
    if index != 3 {
        return Err(Error::UnsupportedJordanType(index));
    }
    let chi = character_map(r);
    let case = normal_form_case(&chi);
    let (target, b21) = match case {
        NormalFormCase::Trivial => return Err(Error::Reducible),
        NormalFormCase::Generic => (generic_normal_form(&chi), None),
        NormalFormCase::Degenerate => {
            let b = degenerate_parameter(&chi)?;
            (degenerate_normal_form(&b), Some(b))
        }
    };
    let jordan = SL3Matrix::jordan_block();
    let mut rows = intertwiner_rows(r.a1.matrix(), jordan.matrix());
    rows.extend(intertwiner_rows(r.a2.matrix(), &target));
    let basis = nullspace(rows, 9);
    let g = basis
        .into_iter()
        .map(|v| ExactMatrix3::from_row_major(v).expect("nine entries"))
        .find(|g| !g.det().is_zero())
        .ok_or_else(|| Error::NoConjugator(format!("no invertible intertwiner for character {chi}")))?;
    let pivot = (0..3).map(|i| g.get(i, 0).clone()).find(|v| !v.is_zero()).expect("invertible matrix has a nonzero first column");
    let g = g.scale(&pivot.recip().expect("nonzero pivot"));
    let normalized = r.conjugate_by(&g)?;
    debug_assert_eq!(normalized.a1(), &jordan);
    debug_assert_eq!(normalized.a2().matrix(), &target);
    Ok(NormalForm { case, b21, conjugator: g, normalized })
}

/// Image of a 2×2 matrix on the monomial basis `(e₁², e₁e₂, e₂²)`.
pub fn sym_square(m: &Mat2) -> Result<SL3Matrix> {
    let d = m.det();
    if !d.is_one() {
        return Err(Error::NotUnimodular(d.to_string()));
    }
    let [[a, b], [c, d]] = &m.rows;
    let two = Rational::from(2);
    let rows = [[a * a, a * b, b * b], [&two * a * c, a * d + b * c, &two * b * d], [c * c, c * d, d * d]];
    SL3Matrix::new(ExactMatrix3::new(rows))
}

/// Generators of the level-2 principal congruence subgroup.
pub fn level_two_generators() -> (Mat2, Mat2) {
    (Mat2::from_i64([[1, 2], [0, 1]]), Mat2::from_i64([[1, 0], [-2, 1]]))
}

/// The integral uniformization representation `ρ₀`.
pub fn uniformization_rep() -> RepPair {
    let g1 = SL3Matrix::from_i64([[1, 2, 0], [0, 1, 16], [0, 0, 1]]).expect("det 1");
    let g2 = SL3Matrix::from_i64([[0, 1, -7], [0, -1, 8], [1, 0, 4]]).expect("det 1");
    RepPair::new(g1, g2).expect("uniformization generators are unipotent")
}

/// The third generator `ρ₀(γ₃)` exactly as tabulated.
pub fn uniformization_gamma3() -> SL3Matrix {
    SL3Matrix::from_i64([[12, 14, 1], [-8, -9, 0], [1, 1, 0]]).expect("det 1")
}
