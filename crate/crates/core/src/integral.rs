//! Integral points of the character surface and the two infinite families of
//! `SL3(Z)` representations, one in each real component.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::betti::{character_map, RepPair};
use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix3, SL3Matrix};
use crate::rational::{bigint_str, square_free_decomposition, Rational};
use crate::surface::{classify_component, on_surface, psi_scalar, solve_z, CharacterPoint, ComponentLabel};

/// Default cap on the recursion index; `u_n` grows roughly like `23^n`.
pub const DEFAULT_INDEX_CAP: u64 = 16;

/// Natural numbers `(k, l, m)` with `(3k + l + 3)² = m(kl − k³ − 1)` and
/// `l > k² + 1/k`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DiophantineTriple {
    #[serde(with = "bigint_str")]
    pub k: BigInt,
    #[serde(with = "bigint_str")]
    pub l: BigInt,
    #[serde(with = "bigint_str")]
    pub m: BigInt,
}

impl DiophantineTriple {
    pub fn new(k: BigInt, l: BigInt, m: BigInt) -> Result<Self> {
        if !verify_diophantine(&k, &l, &m) {
            return Err(Error::InvalidTriple(format!("({k}, {l}, {m})")));
        }
        Ok(DiophantineTriple { k, l, m })
    }

    /// `3k + l + 3`.
    pub fn numerator(&self) -> BigInt {
        &self.k * 3 + &self.l + 3
    }

    /// The parameter point `(1/k, l/k)`.
    pub fn param(&self) -> (Rational, Rational) {
        (Rational::new(1, self.k.clone()), Rational::new(self.l.clone(), self.k.clone()))
    }
}

/// Exact check of `(3k + l + 3)² = m(kl − k³ − 1)` and `l > k² + 1/k` for positive inputs.
pub fn verify_diophantine(k: &BigInt, l: &BigInt, m: &BigInt) -> bool {
    if !(k.is_positive() && l.is_positive() && m.is_positive()) {
        return false;
    }
    let lhs = k * 3 + l + 3;
    let lhs = &lhs * &lhs;
    let rhs = m * (k * l - k * k * k - 1);
    // l > k^2 + 1/k  <=>  k l > k^3 + 1 for k > 0
    lhs == rhs && k * l > k * k * k + 1
}

/// Iterates `u_{n+1} = 23 u_n − u_{n−1} − 4` from `u₀ = 1, u₁ = 2`.
#[derive(Clone, Debug)]
pub struct RecursionState {
    pub n: u64,
    pub u_prev: BigInt,
    pub u_curr: BigInt,
}

impl RecursionState {
    pub fn start() -> Self {
        RecursionState { n: 1, u_prev: BigInt::one(), u_curr: BigInt::from(2) }
    }

    pub fn next_value(&self) -> BigInt {
        &self.u_curr * 23 - &self.u_prev - 4
    }

    pub fn advance(&mut self) {
        let next = self.next_value();
        self.u_prev = std::mem::replace(&mut self.u_curr, next);
        self.n += 1;
    }
}

/// `u_0, …, u_{len−1}`.
pub fn recursion_sequence(len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut state = RecursionState::start();
    out.push(state.u_prev.clone());
    while out.len() < len {
        out.push(state.u_curr.clone());
        state.advance();
    }
    out.truncate(len);
    out
}

/// `b_n = 29 + u_n² + u_n(4 − 23 u_{n−1}) + u_{n−1}(4 + u_{n−1})`.
fn invariant_b(u_n: &BigInt, u_prev: &BigInt) -> BigInt {
    BigInt::from(29) + u_n * u_n + u_n * (BigInt::from(4) - u_prev * 23) + u_prev * (u_prev + 4)
}

/// Triple number `n ≥ 1`: `k = u_n`, `l = u_n² + u_{n−1}`, `m = (u_{n+1} + 2)(u_n + 2) + 24`.
pub fn hitchin_recursion(n: u64) -> Result<DiophantineTriple> {
    hitchin_recursion_capped(n, DEFAULT_INDEX_CAP)
}

pub fn hitchin_recursion_capped(n: u64, cap: u64) -> Result<DiophantineTriple> {
    if n == 0 {
        return Err(Error::InvalidTriple("recursion index starts at 1".into()));
    }
    if n > cap {
        return Err(Error::IndexTooLarge { index: n, cap });
    }
    let mut state = RecursionState::start();
    while state.n < n {
        state.advance();
    }
    // run backwards for u_{n-2}; at n = 1 this gives u_{-1} = 17
    let u_prev2 = prev_of(&state);
    let u_n = &state.u_curr;
    let u_prev = &state.u_prev;
    let u_next = state.next_value();
    let k = u_n.clone();
    let l = u_n * u_n + u_prev;
    let m = (&u_next + 2) * (u_n + 2) + 24;
    let defect = {
        let a = &k * 3 + &l + 3;
        &a * &a - &m * (&k * &l - &k * &k * &k - 1)
    };
    let expected = (BigInt::one() + u_n * u_n) * invariant_b(u_prev, &u_prev2);
    assert_eq!(defect, expected, "recursion identity failed at n = {n}");
    DiophantineTriple::new(k, l, m)
}

/// `u_{n−2}` from `u_n = 23 u_{n−1} − u_{n−2} − 4`.
fn prev_of(state: &RecursionState) -> BigInt {
    &state.u_prev * 23 - &state.u_curr - 4
}

/// An integral representation together with its character and component.
#[derive(Clone, Debug, Serialize)]
pub struct IntegralWitness {
    pub source: WitnessSource,
    pub rep: RepPair,
    pub character: CharacterPoint,
    pub component: ComponentLabel,
    /// Parameter point `(s, t)` with `Ψ(s, t) = character`.
    pub param: (Rational, Rational),
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    C1Family {
        #[serde(with = "bigint_str")]
        n: BigInt,
    },
    C2Family {
        triple: DiophantineTriple,
        #[serde(with = "bigint_str")]
        square_free: BigInt,
        #[serde(with = "bigint_str")]
        square_root: BigInt,
    },
}

impl IntegralWitness {
    fn certify(source: WitnessSource, rep: RepPair, param: (Rational, Rational)) -> Result<Self> {
        let character = character_map(&rep);
        debug_assert!(on_surface(&character));
        let component = classify_component(&character)?;
        if !rep.is_integral() || !character.is_integral() {
            return Err(Error::Unsupported("constructed representation is not integral".into()));
        }
        let psi = psi_scalar(&param.0, &param.1)?;
        if psi != character {
            return Err(Error::Unsupported(format!("character {character} differs from psi {psi}")));
        }
        Ok(IntegralWitness { source, rep, character, component, param })
    }
}

/// The integral family with character `Ψ(n, n²)`, lying in `C1`.
pub fn c1_family(n: &BigInt) -> Result<IntegralWitness> {
    let w: BigInt = BigInt::from(3) + n * 3 + n * n;
    let g1 = SL3Matrix::new(ExactMatrix3::new([
        [1.into(), w.clone().into(), 0.into()],
        [0.into(), 1.into(), w.into()],
        [0.into(), 0.into(), 1.into()],
    ]))?;
    let g2 = SL3Matrix::new(ExactMatrix3::new([
        [0.into(), 0.into(), (-1).into()],
        [1.into(), 0.into(), Rational::from(n + 3)],
        [Rational::from(-n), (-1).into(), 3.into()],
    ]))?;
    let rep = RepPair::new(g1, g2)?;
    let param = (Rational::from(n.clone()), Rational::from(n * n));
    IntegralWitness::certify(WitnessSource::C1Family { n: n.clone() }, rep, param)
}

/// The unconjugated second generator for a triple; entries have denominator `m`.
pub fn c2_pre_conjugation(t: &DiophantineTriple) -> ExactMatrix3 {
    let (k, m) = (&t.k, &t.m);
    let num = t.numerator();
    let q = |n: BigInt| Rational::new(n, m.clone());
    ExactMatrix3::new([
        [Rational::zero(), q(num.clone()), -q(k * k + k * 3 + 3)],
        [Rational::zero(), Rational::from(-k), -q(&num - k * m)],
        [Rational::from(m.clone()), Rational::zero(), Rational::from(k + 3)],
    ])
}

/// The diagonal-ish conjugator `[[b/m, 0, bk/m], [0, 1, 0], [0, 0, b]]`.
pub fn c2_conjugator(t: &DiophantineTriple, b: &BigInt) -> ExactMatrix3 {
    let bm = Rational::new(b.clone(), t.m.clone());
    let bkm = Rational::new(b * &t.k, t.m.clone());
    ExactMatrix3::new([
        [bm, Rational::zero(), bkm],
        [Rational::zero(), Rational::one(), Rational::zero()],
        [Rational::zero(), Rational::zero(), Rational::from(b.clone())],
    ])
}

/// Integral representation in the Hitchin component `C2` for a triple.
pub fn c2_rep(t: &DiophantineTriple) -> Result<IntegralWitness> {
    let t = DiophantineTriple::new(t.k.clone(), t.l.clone(), t.m.clone())?;
    let (a, b) = square_free_decomposition(&t.m);
    let num = t.numerator();
    let ab = &a * &b;
    if !num.is_multiple_of(&ab) {
        return Err(Error::DivisibilityFailure { ab: ab.to_string(), value: num.to_string() });
    }
    let pre = RepPair::new(SL3Matrix::jordan_block(), SL3Matrix::new(c2_pre_conjugation(&t))?)?;
    let rep = pre.conjugate_by(&c2_conjugator(&t, &b))?;
    for g in [rep.a1().clone(), rep.a2().clone(), rep.a3()] {
        if g.unipotency_index()? != 3 {
            return Err(Error::Unsupported("conjugated generator is not maximally unipotent".into()));
        }
    }
    let param = t.param();
    let source = WitnessSource::C2Family { triple: t, square_free: a, square_root: b };
    IntegralWitness::certify(source, rep, param)
}

pub fn c2_from_index(n: u64, cap: u64) -> Result<IntegralWitness> {
    c2_rep(&hitchin_recursion_capped(n, cap)?)
}

/// An integer point of the surface and its real component.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ScannedPoint {
    pub point: CharacterPoint,
    pub component: ComponentLabel,
}

/// All integer points with `x, y` in the given inclusive ranges, sorted
/// lexicographically. Rows of the box are processed in parallel.
pub fn scan_integer_points(x_range: (i64, i64), y_range: (i64, i64)) -> Vec<ScannedPoint> {
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    if x0 > x1 || y0 > y1 {
        return Vec::new();
    }
    let mut out: Vec<ScannedPoint> = (x0..=x1)
        .into_par_iter()
        .flat_map_iter(|x| {
            (y0..=y1).flat_map(move |y| {
                let (xr, yr) = (Rational::from(x), Rational::from(y));
                let mut roots = solve_z(&xr, &yr);
                roots.dedup();
                roots.into_iter().filter(Rational::is_integer).map(move |z| {
                    let point = CharacterPoint::new(xr.clone(), yr.clone(), z);
                    let component = classify_component(&point).expect("roots lie on the surface");
                    ScannedPoint { point, component }
                })
            })
        })
        .collect();
    out.sort_by(|a, b| (&a.point.x, &a.point.y, &a.point.z).cmp(&(&b.point.x, &b.point.y, &b.point.z)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn triple(k: i64, l: i64, m: i64) -> (BigInt, BigInt, BigInt) {
        (big(k), big(l), big(m))
    }

    #[test]
    fn recursion_values() {
        let u = recursion_sequence(6);
        assert_eq!(u, vec![big(1), big(2), big(41), big(937), big(21506), big(493697)]);
    }

    #[test]
    fn recursion_triples() {
        let t1 = hitchin_recursion(1).unwrap();
        assert_eq!((t1.k.clone(), t1.l.clone(), t1.m.clone()), triple(2, 5, 196));
        assert_eq!(big(14) * big(14), big(196) * (big(10) - big(8) - big(1)));
        let t2 = hitchin_recursion(2).unwrap();
        assert_eq!((t2.k.clone(), t2.l.clone(), t2.m.clone()), triple(41, 1683, 40401));
        assert_eq!(big(1809) * big(1809), big(40401) * big(81));
        let t3 = hitchin_recursion(3).unwrap();
        assert_eq!(t3.k, big(937));
        assert_eq!(t3.l, big(878010));
        assert_eq!(t3.m, (big(21506) + 2) * (big(937) + 2) + 24);
    }

    #[test]
    fn recursion_cap() {
        assert!(matches!(hitchin_recursion(17), Err(Error::IndexTooLarge { .. })));
        assert!(hitchin_recursion_capped(20, 20).is_ok());
        assert!(hitchin_recursion(0).is_err());
    }

    #[test]
    fn verify_examples() {
        let (k, l, m) = triple(2, 5, 196);
        assert!(verify_diophantine(&k, &l, &m));
        let (k, l, m) = triple(41, 1683, 40401);
        assert!(verify_diophantine(&k, &l, &m));
        let (k, l, m) = triple(2, 5, 195);
        assert!(!verify_diophantine(&k, &l, &m));
        let (k, l, m) = triple(0, 5, 196);
        assert!(!verify_diophantine(&k, &l, &m));
    }

    #[test]
    fn c1_examples() {
        let w = c1_family(&big(1)).unwrap();
        assert_eq!(w.character, CharacterPoint::from_i64(-46, -46, -46));
        assert_eq!(w.rep.a2(), &SL3Matrix::from_i64([[0, 0, -1], [1, 0, 4], [-1, -1, 3]]).unwrap());
        assert_eq!(w.component, ComponentLabel::C1);
        assert_eq!(c1_family(&big(0)).unwrap().character, CharacterPoint::from_i64(-6, 3, 3));
        assert_eq!(c1_family(&big(-1)).unwrap().character, CharacterPoint::from_i64(2, 4, 2));
    }

    #[test]
    fn c2_first_triple() {
        let t = hitchin_recursion(1).unwrap();
        let w = c2_rep(&t).unwrap();
        assert_eq!(w.rep.a1(), &SL3Matrix::from_i64([[1, 14, 0], [0, 1, 14], [0, 0, 1]]).unwrap());
        assert_eq!(w.rep.a2(), &SL3Matrix::from_i64([[-2, 1, -27], [0, -2, 27], [1, 0, 7]]).unwrap());
        assert_eq!(w.character, CharacterPoint::from_i64(395, 199, 983));
        assert_eq!(w.component, ComponentLabel::C2);
    }

    #[test]
    fn c2_rejects_bad_triples() {
        let bad = DiophantineTriple { k: big(2), l: big(5), m: big(195) };
        assert!(matches!(c2_rep(&bad), Err(Error::InvalidTriple(_))));
    }

    #[test]
    fn c2_pre_conjugation_is_generic_normal_form() {
        let t = hitchin_recursion(2).unwrap();
        let (s, tt) = t.param();
        let chi = psi_scalar(&s, &tt).unwrap();
        assert_eq!(c2_pre_conjugation(&t), crate::betti::generic_normal_form(&chi));
    }

    #[test]
    fn scan_small_box() {
        let pts = scan_integer_points((84, 84), (84, 84));
        let zs: Vec<_> = pts.iter().map(|p| p.point.z.clone()).collect();
        assert_eq!(zs, vec![Rational::from(246), Rational::from(5349)]);
        let pts = scan_integer_points((3, 3), (3, 3));
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].component, ComponentLabel::C1);
        assert!(scan_integer_points((35, 35), (99, 99)).iter().any(|p| p.point == CharacterPoint::from_i64(35, 99, 643)));
        assert!(scan_integer_points((1, 0), (0, 0)).is_empty());
    }
}
