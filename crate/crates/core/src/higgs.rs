//! Residues of rank-3 strongly parabolic Higgs fields on the sphere with
//! punctures at 0, 1 and ∞, and the linear test for real representations.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{nullspace, GaussianRational};
use crate::matrix::ComplexMatrix3;
use crate::rational::Rational;

type C = GaussianRational;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum HiggsFamily {
    /// Bundle `O(−1) ⊕ O ⊕ O(1)` with cubic differential `Q`.
    CyclicQ { q: C },
    /// Trivial bundle, kernels spanning, generic position.
    GenI { alpha: C, beta: C },
    /// Trivial bundle, `ker(r1²) ∩ (ℓ2 ⊕ ℓ3) = ℓ2`.
    GenII { xi: C },
    /// Trivial bundle, `ker(r1²) ∩ (ℓ2 ⊕ ℓ3) = ℓ3`.
    GenIII { xi: C },
    /// Trivial bundle, kernels span at most a plane.
    GenIV { xi: C },
}

impl HiggsFamily {
    pub fn name(&self) -> &'static str {
        match self {
            HiggsFamily::CyclicQ { .. } => "cyclicQ",
            HiggsFamily::GenI { .. } => "genI",
            HiggsFamily::GenII { .. } => "genII",
            HiggsFamily::GenIII { .. } => "genIII",
            HiggsFamily::GenIV { .. } => "genIV",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            HiggsFamily::CyclicQ { .. } => Ok(()),
            HiggsFamily::GenI { alpha, beta } => {
                if beta.is_zero() || (beta.clone() + C::one()).is_zero() {
                    return Err(Error::ExcludedParameter(format!("genI needs beta not in {{0, -1}}, got {beta}")));
                }
                if alpha.is_zero() {
                    return Err(Error::ExcludedParameter("genI with alpha = 0 is the zero field".into()));
                }
                Ok(())
            }
            HiggsFamily::GenII { xi } | HiggsFamily::GenIII { xi } | HiggsFamily::GenIV { xi } => {
                if xi.is_zero() {
                    Err(Error::ExcludedParameter(format!("{} needs xi != 0", self.name())))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Residues at `z = 0, 1, ∞`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ResidueData {
    pub r1: ComplexMatrix3,
    pub r2: ComplexMatrix3,
    pub r3: ComplexMatrix3,
    /// False for the cyclic family, whose residues live in different fibres of a
    /// nontrivial bundle and so are not subject to the residue theorem.
    pub residue_sum_applies: bool,
}

impl ResidueData {
    pub fn from_pair(r1: ComplexMatrix3, r2: ComplexMatrix3) -> Self {
        let r3 = -&(&r1 + &r2);
        ResidueData { r1, r2, r3, residue_sum_applies: true }
    }

    pub fn residues(&self) -> [&ComplexMatrix3; 3] {
        [&self.r1, &self.r2, &self.r3]
    }
}

fn cm(rows: [[C; 3]; 3]) -> ComplexMatrix3 {
    ComplexMatrix3::new(rows)
}

fn c(n: i64) -> C {
    C::from(n)
}

pub fn build_family(f: &HiggsFamily) -> Result<ResidueData> {
    f.validate()?;
    Ok(match f {
        HiggsFamily::CyclicQ { .. } => {
            let n = cm([[c(0), c(1), c(0)], [c(0), c(0), c(1)], [c(0), c(0), c(0)]]);
            ResidueData { r1: n.clone(), r2: n.clone(), r3: n, residue_sum_applies: false }
        }
        HiggsFamily::GenI { alpha, beta } => {
            let one = C::one();
            let b1 = beta.clone() + one.clone();
            let r1 = cm([[c(0), b1.clone(), beta.clone()], [c(0), c(1), c(1)], [c(0), c(-1), c(-1)]]);
            let r2 = cm([[c(-1), c(0), -beta.clone()], [-(one.clone() / b1), c(0), c(-1)], [one / beta.clone(), c(0), c(1)]]);
            ResidueData::from_pair(r1.scale(alpha), r2.scale(alpha))
        }
        HiggsFamily::GenII { xi } => ResidueData::from_pair(
            cm([[c(0), c(1), c(0)], [c(0), c(0), c(1)], [c(0), c(0), c(0)]]),
            cm([[c(0), c(0), c(0)], [c(0), c(0), c(-1)], [xi.clone(), c(0), c(0)]]),
        ),
        HiggsFamily::GenIII { xi } => ResidueData::from_pair(
            cm([[c(0), c(0), c(1)], [c(0), c(0), c(0)], [c(0), c(1), c(0)]]),
            cm([[c(0), c(0), c(-1)], [xi.clone(), c(0), c(0)], [c(0), c(0), c(0)]]),
        ),
        HiggsFamily::GenIV { xi } => ResidueData::from_pair(
            cm([[c(0), c(0), xi.clone()], [c(0), c(0), c(0)], [c(0), c(1), c(0)]]),
            cm([[c(0), c(0), c(0)], [c(0), c(0), -xi.clone()], [c(1), c(0), c(0)]]),
        ),
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NilpotencyReport {
    /// `tr r = tr r² = tr r³ = 0`.
    pub trace_conditions: bool,
    /// Least `k` with `rᵏ = 0`, if any.
    pub index: Option<u8>,
}

impl NilpotencyReport {
    pub fn is_maximal(&self) -> bool {
        self.trace_conditions && self.index == Some(3)
    }
}

pub fn check_nilpotency(d: &ResidueData) -> [NilpotencyReport; 3] {
    d.residues().map(|r| {
        let r2 = r.mul_ref(r);
        let r3 = r2.mul_ref(r);
        NilpotencyReport {
            trace_conditions: r.trace().is_zero() && r2.trace().is_zero() && r3.trace().is_zero(),
            index: r.nilpotency_index(),
        }
    })
}

/// A solution of `g rᵢ = rᵢᵗ g`, scaled to `det g = 1` when the needed cube root is rational.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct RealCertificate {
    pub g: ComplexMatrix3,
    pub det: C,
    pub det_normalized: bool,
    /// Dimension of the solution space of the linear system.
    pub solution_dim: usize,
}

fn to_matrix(v: &[C]) -> ComplexMatrix3 {
    ComplexMatrix3::from_fn(|i, j| v[3 * i + j].clone())
}

/// Rows of the linear system `g r − rᵗ g = 0` in the unknowns `g[i][j]` (index `3i + j`).
fn symmetry_rows(r: &ComplexMatrix3) -> Vec<Vec<C>> {
    let mut rows = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let mut row = vec![C::zero(); 9];
            for k in 0..3 {
                row[3 * i + k] = row[3 * i + k].clone() + r.get(k, j).clone();
                row[3 * k + j] = row[3 * k + j].clone() - r.get(k, i).clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Basis of all `g` with `g rᵢ = rᵢᵗ g` for the three residues.
pub fn symmetry_solutions(d: &ResidueData) -> Vec<ComplexMatrix3> {
    let rows: Vec<Vec<C>> = d.residues().into_iter().flat_map(symmetry_rows).collect();
    nullspace(rows, 9).iter().map(|v| to_matrix(v)).collect()
}

fn combine(basis: &[ComplexMatrix3], coeffs: &[i64]) -> ComplexMatrix3 {
    basis.iter().zip(coeffs).fold(ComplexMatrix3::zero(), |acc, (b, &k)| &acc + &b.scale(&C::from(k)))
}

/// Looks for an invertible `g` intertwining each residue with its transpose.
/// Basis elements and their pairwise sums are tried first, then random
/// integer combinations drawn from a generator seeded by `seed`.
pub fn real_criterion(d: &ResidueData, seed: u64) -> Option<RealCertificate> {
    let basis = symmetry_solutions(d);
    let dim = basis.len();
    if dim == 0 {
        return None;
    }
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        candidates.push(e);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            e[j] = 1;
            candidates.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        candidates.push((0..dim).map(|_| rng.gen_range(-7..=7)).collect());
    }
    let g = candidates.iter().map(|e| combine(&basis, e)).find(|g| !g.det().is_zero())?;
    Some(normalize_det(g, dim))
}

fn normalize_det(g: ComplexMatrix3, dim: usize) -> RealCertificate {
    let det = g.det();
    let root = if det.is_real() { det.re.recip().and_then(|r| r.cbrt_exact()) } else { None };
    match root {
        Some(lambda) => {
            let g = g.scale(&C::from(lambda));
            RealCertificate { det: g.det(), g, det_normalized: true, solution_dim: dim }
        }
        None => RealCertificate { g, det, det_normalized: false, solution_dim: dim },
    }
}

/// Exact check of `g rᵢ = rᵢᵗ g` for all three residues.
pub fn verify_real_certificate(d: &ResidueData, g: &ComplexMatrix3) -> bool {
    d.residues().iter().all(|r| g.mul_ref(r) == r.transpose().mul_ref(g))
}

/// Cubic differentials `q1`, `q2` give isometric data iff `|q1| = |q2|`.
pub fn cyclic_ray_invariant(q1: &C, q2: &C) -> bool {
    q1.norm_sqr() == q2.norm_sqr()
}

/// How the kernel lines `ℓᵢ = ker rᵢ` sit relative to each other.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelConfiguration {
    /// Lines span, and `ker(r1²) ∩ (ℓ2 ⊕ ℓ3)` is neither `ℓ2` nor `ℓ3`.
    Generic,
    /// Lines span, intersection equals `ℓ2`.
    MeetsL2,
    /// Lines span, intersection equals `ℓ3`.
    MeetsL3,
    /// Lines span at most a plane.
    Degenerate,
    /// Some residue is not maximally nilpotent.
    NotMaximal,
}

fn det_of_columns(a: &[C], b: &[C], c: &[C]) -> C {
    ComplexMatrix3::from_fn(|i, j| [a, b, c][j][i].clone()).det()
}

pub fn kernel_configuration(d: &ResidueData) -> KernelConfiguration {
    let line = |r: &ComplexMatrix3| -> Option<Vec<C>> {
        let mut k = nullspace(rows_of(r), 3);
        (k.len() == 1).then(|| k.pop().unwrap())
    };
    let (Some(l1), Some(l2), Some(l3)) = (line(&d.r1), line(&d.r2), line(&d.r3)) else {
        return KernelConfiguration::NotMaximal;
    };
    if det_of_columns(&l1, &l2, &l3).is_zero() {
        return KernelConfiguration::Degenerate;
    }
    let k = nullspace(rows_of(&d.r1.mul_ref(&d.r1)), 3);
    if k.len() != 2 {
        return KernelConfiguration::NotMaximal;
    }
    // a k0 + b k1 − c l2 − d l3 = 0; the (c, d) part describes the intersection line
    let rows: Vec<Vec<C>> = (0..3).map(|i| vec![k[0][i].clone(), k[1][i].clone(), -l2[i].clone(), -l3[i].clone()]).collect();
    let meet = nullspace(rows, 4);
    match meet.as_slice() {
        [v] if v[3].is_zero() => KernelConfiguration::MeetsL2,
        [v] if v[2].is_zero() => KernelConfiguration::MeetsL3,
        _ => KernelConfiguration::Generic,
    }
}

fn rows_of(m: &ComplexMatrix3) -> Vec<Vec<C>> {
    (0..3).map(|i| (0..3).map(|j| m.get(i, j).clone()).collect()).collect()
}

/// Convenience constructor for real rational parameters.
pub fn gen_i(alpha: impl Into<Rational>, beta: impl Into<Rational>) -> HiggsFamily {
    HiggsFamily::GenI { alpha: C::from(alpha.into()), beta: C::from(beta.into()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn cmi(rows: [[i64; 3]; 3]) -> ComplexMatrix3 {
        ComplexMatrix3::from_fn(|i, j| C::from(rows[i][j]))
    }

    #[test]
    fn printed_residues() {
        let d = build_family(&HiggsFamily::GenII { xi: c(1) }).unwrap();
        assert_eq!(d.r1, cmi([[0, 1, 0], [0, 0, 1], [0, 0, 0]]));
        assert_eq!(d.r2, cmi([[0, 0, 0], [0, 0, -1], [1, 0, 0]]));
        let d = build_family(&HiggsFamily::GenIV { xi: c(2) }).unwrap();
        assert_eq!(d.r1, cmi([[0, 0, 2], [0, 0, 0], [0, 1, 0]]));
        assert_eq!(d.r2, cmi([[0, 0, 0], [0, 0, -2], [1, 0, 0]]));
        let d = build_family(&gen_i(1, 1)).unwrap();
        assert_eq!(d.r1, cmi([[0, 2, 1], [0, 1, 1], [0, -1, -1]]));
        assert_eq!(d.r2.get(1, 0), &C::from(q("-1/2")));
    }

    #[test]
    fn excluded_parameters() {
        assert!(matches!(build_family(&gen_i(1, 0)), Err(Error::ExcludedParameter(_))));
        assert!(build_family(&gen_i(3, -1)).is_err());
        assert!(build_family(&gen_i(0, 2)).is_err());
        assert!(build_family(&HiggsFamily::GenIII { xi: c(0) }).is_err());
    }

    #[test]
    fn residues_sum_and_nilpotency() {
        let families = [
            gen_i(1, q("-1/2")),
            gen_i(q("2/3"), 5),
            HiggsFamily::GenI { alpha: "1+i".parse().unwrap(), beta: "2-i".parse().unwrap() },
            HiggsFamily::GenII { xi: c(3) },
            HiggsFamily::GenIII { xi: "i".parse().unwrap() },
            HiggsFamily::GenIV { xi: c(-5) },
        ];
        for f in &families {
            let d = build_family(f).unwrap();
            assert!((&(&d.r1 + &d.r2) + &d.r3).is_zero());
            for rep in check_nilpotency(&d) {
                assert!(rep.is_maximal(), "{f:?}: {rep:?}");
            }
        }
        let zero = ResidueData::from_pair(ComplexMatrix3::zero(), ComplexMatrix3::zero());
        assert_eq!(check_nilpotency(&zero)[0].index, Some(1));
    }

    #[test]
    fn real_criterion_gen_i() {
        let d = build_family(&gen_i(1, q("-1/2"))).unwrap();
        let cert = real_criterion(&d, 0).unwrap();
        assert!(cert.det_normalized);
        assert_eq!(cert.det, C::one());
        assert_eq!(cert.solution_dim, 1);
        let h = C::from(q("1/2"));
        let expected = ComplexMatrix3::new([[c(0), c(-1), c(-1)], [c(-1), c(0), h.clone()], [c(-1), h, c(0)]]);
        assert_eq!(cert.g, expected);
        assert!(verify_real_certificate(&d, &cert.g));
        for beta in ["1", "-2", "1/3", "-49/100"] {
            assert!(real_criterion(&build_family(&gen_i(1, q(beta))).unwrap(), 0).is_none());
        }
    }

    #[test]
    fn real_criterion_other_families() {
        for f in [HiggsFamily::GenII { xi: c(1) }, HiggsFamily::GenIII { xi: c(2) }, HiggsFamily::GenIV { xi: c(3) }] {
            assert!(real_criterion(&build_family(&f).unwrap(), 7).is_none());
        }
        let d = build_family(&HiggsFamily::CyclicQ { q: c(0) }).unwrap();
        let cert = real_criterion(&d, 0).unwrap();
        assert!(verify_real_certificate(&d, &cert.g));
    }

    #[test]
    fn kernel_configurations() {
        let cfg = |f: HiggsFamily| kernel_configuration(&build_family(&f).unwrap());
        assert_eq!(cfg(gen_i(1, q("-1/2"))), KernelConfiguration::Generic);
        assert_eq!(cfg(gen_i(2, 7)), KernelConfiguration::Generic);
        assert_eq!(cfg(HiggsFamily::GenII { xi: c(1) }), KernelConfiguration::MeetsL2);
        assert_eq!(cfg(HiggsFamily::GenIII { xi: c(1) }), KernelConfiguration::MeetsL3);
        assert_eq!(cfg(HiggsFamily::GenIV { xi: c(1) }), KernelConfiguration::Degenerate);
    }

    #[test]
    fn ray_invariant() {
        let g = |s: &str| s.parse::<C>().unwrap();
        assert!(cyclic_ray_invariant(&g("1"), &g("i")));
        assert!(!cyclic_ray_invariant(&g("1"), &g("2")));
        assert!(cyclic_ray_invariant(&g("0"), &g("0")));
        assert!(cyclic_ray_invariant(&g("3/5+4/5i"), &g("-1")));
    }
}
