//! Cones over affine spheres: the convex potential φ, its Monge-Ampere metric
//! and the semi-flat metric on the tangent bundle.

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct ConeGeometry {
    pub n: u32,
    pub h: i8,
    pub r: f64,
}

impl ConeGeometry {
    pub fn new(n: u32, h: i8, r: f64) -> Result<Self> {
        let c = ConeGeometry { n, h, r };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidDomain("base dimension must be positive".into()));
        }
        if self.h != 1 && self.h != -1 {
            return Err(Error::InvalidDomain(format!("H must be +1 or -1, got {}", self.h)));
        }
        if !(self.r.is_finite() && self.r > 0.0) || !(self.base() > 0.0) {
            return Err(Error::InvalidDomain(format!("r = {} outside the cone domain", self.r)));
        }
        Ok(())
    }

    fn hf(&self) -> f64 {
        f64::from(self.h)
    }

    fn exponent(&self) -> i32 {
        self.n as i32 + 1
    }

    /// `1 − H r^{n+1}`.
    fn base(&self) -> f64 {
        1.0 - self.hf() * self.r.powi(self.exponent())
    }

    /// `φ'(r) = −H (1 − H r^{n+1})^{1/(n+1)}`.
    pub fn phi_prime(&self) -> f64 {
        -self.hf() * self.base().powf(1.0 / f64::from(self.exponent()))
    }

    /// `φ''(r) = rⁿ (1 − H r^{n+1})^{−n/(n+1)}`.
    pub fn phi_second(&self) -> f64 {
        ma_metric_coeffs_unchecked(self).0
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G_WEIGHTS: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Kronrod estimate, its difference from the embedded Gauss rule, and the
/// Kronrod rule applied to `|f|`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = K_WEIGHTS[7] * fc;
    let mut g = G_WEIGHTS[3] * fc;
    let mut k_abs = K_WEIGHTS[7] * fc.abs();
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let (lo, hi) = (f(c - x), f(c + x));
        k += K_WEIGHTS[i] * (lo + hi);
        k_abs += K_WEIGHTS[i] * (lo.abs() + hi.abs());
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * (lo + hi);
        }
    }
    (k * h, ((k - g) * h).abs(), k_abs * h.abs())
}

/// Adaptive Gauss-Kronrod with absolute tolerance `tol`. Panels whose error
/// estimate is at rounding level are accepted, which bounds the recursion.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (k, err, k_abs) = gk15(f, a, b);
        if err <= tol || err <= 64.0 * f64::EPSILON * k_abs || depth == 0 {
            return k;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth - 1) + rec(f, m, b, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    rec(&f, a, b, tol, 30)
}

pub const PHI_TOL: f64 = 1e-12;

/// `g(ρ) = (1 − H ρ^{n+1})^{1/(n+1)} − 1`, accurate for small `ρ`.
fn excess(n: u32, h: i8) -> impl Fn(f64) -> f64 {
    let e = f64::from(n + 1);
    let hf = f64::from(h);
    move |rho: f64| ((-hf * rho.powi(n as i32 + 1)).max(-1.0).ln_1p() / e).exp_m1()
}

/// `φ(r) = −H ∫₀^r (1 − H ρ^{n+1})^{1/(n+1)} dρ = −H (r + ∫₀^r g)`.
pub fn phi(c: &ConeGeometry) -> Result<f64> {
    c.validate()?;
    Ok(-f64::from(c.h) * (c.r + integrate(excess(c.n, c.h), 0.0, c.r, PHI_TOL)))
}

fn check_stencil(c: &ConeGeometry, d: f64) -> Result<()> {
    c.validate()?;
    if !(d > 0.0 && d < c.r) {
        return Err(Error::InvalidDomain(format!("step {d} must lie in (0, r)")));
    }
    ConeGeometry::new(c.n, c.h, c.r + d).map(|_| ())
}

/// `(φ(r + d) − φ(r − d)) / 2d`, with both increments integrated over the offset `s ∈ [0, d]`.
pub fn phi_central_slope(c: &ConeGeometry, d: f64) -> Result<f64> {
    check_stencil(c, d)?;
    let g = excess(c.n, c.h);
    let sum = integrate(|s| g(c.r + s) + g(c.r - s), 0.0, d, PHI_TOL * d);
    Ok(-f64::from(c.h) * (1.0 + sum / (2.0 * d)))
}

/// `(φ(r + d) − 2φ(r) + φ(r − d)) / d²`; the linear part cancels exactly.
pub fn phi_second_difference(c: &ConeGeometry, d: f64) -> Result<f64> {
    check_stencil(c, d)?;
    let g = excess(c.n, c.h);
    let scale = (g(c.r + d) - g(c.r - d)).abs() * d;
    let diff = integrate(|s| g(c.r + s) - g(c.r - s), 0.0, d, 1e-10 * scale);
    Ok(-f64::from(c.h) * diff / (d * d))
}

fn ma_metric_coeffs_unchecked(c: &ConeGeometry) -> (f64, f64) {
    let e = f64::from(c.exponent());
    let base = c.base();
    let n = c.n as i32;
    (base.powf(-f64::from(n) / e) * c.r.powi(n), c.r * base.powf(1.0 / e))
}

/// `(c_rr, c_base)` with `∇dφ = c_rr dr² + c_base π*g`.
pub fn ma_metric_coeffs(c: &ConeGeometry) -> Result<(f64, f64)> {
    c.validate()?;
    Ok(ma_metric_coeffs_unchecked(c))
}

/// `|det − 1|` for the metric in the frame `(r^{−n}∂_r, f₁ … fₙ)` with
/// `det_g(f) = 1`, which has unit volume for `det_B = rⁿ det_{π*g} ∧ dr`.
pub fn verify_monge_ampere(c: &ConeGeometry) -> Result<f64> {
    let (c_rr, c_base) = ma_metric_coeffs(c)?;
    let n = c.n as i32;
    let det = c_rr * c.r.powi(-2 * n) * c_base.powi(n);
    Ok((det - 1.0).abs())
}

/// The Monge-Ampere metric as a matrix in coordinates `(r, base)`.
pub fn ma_metric_matrix(c: &ConeGeometry, base_metric: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (c_rr, c_base) = ma_metric_coeffs(c)?;
    let n = c.n as usize;
    if base_metric.shape() != (n, n) {
        return Err(Error::ShapeMismatch { expected: n * n, found: base_metric.len() });
    }
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m[(0, 0)] = c_rr;
    m.view_mut((1, 1), (n, n)).copy_from(&(base_metric * c_base));
    Ok(m)
}

fn ser_matrix<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    rows.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct SemiFlatSample {
    #[serde(serialize_with = "ser_matrix")]
    pub base_metric: DMatrix<f64>,
    #[serde(serialize_with = "ser_matrix")]
    pub j: DMatrix<f64>,
    #[serde(serialize_with = "ser_matrix")]
    pub g: DMatrix<f64>,
}

impl SemiFlatSample {
    /// `ω(v, w) = g(Jv, w)`, i.e. the matrix `Jᵗ g`.
    pub fn kahler_form(&self) -> DMatrix<f64> {
        self.j.transpose() * &self.g
    }
}

/// `g = diag(B, B)` and `J = [[0, −I], [I, 0]]` on `TB = B ⊕ B`.
pub fn semiflat_assemble(base: &DMatrix<f64>) -> Result<SemiFlatSample> {
    let (n, m) = base.shape();
    if n != m || n == 0 {
        return Err(Error::ShapeMismatch { expected: n * n, found: base.len() });
    }
    let scale = base.amax();
    if (base - base.transpose()).amax() > 1e-12 * scale || base.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(base);
    g.view_mut((n, n), (n, n)).copy_from(base);
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    Ok(SemiFlatSample { base_metric: base.clone(), j, g })
}
