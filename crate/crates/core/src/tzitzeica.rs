//! Newton solver for the Tzitzeica equation of hyperbolic affine spheres on a
//! disk, discretized by the 5-point Laplacian with Shortley-Weller boundary
//! stencils on cut cells.
//!
//! Flat chart:      Δu + 8|q|² e^{−4u} − ½ e^{2u} = 0
//! Hyperbolic disk: 2Δ_{g₀}u + 2|Q|²_{g₀} e^{−4u} − e^{2u} + 1 = 0,
//! with g₀ = λ|dz|², λ = 4/(1−ρ²)², Δ_{g₀} = Δ/λ and |Q|²_{g₀} = 8|q|²/λ³ for Q = q dz³.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::field::GaussianRational;

/// Largest disk radius accepted for the hyperbolic background.
pub const MAX_HYPERBOLIC_RADIUS: f64 = 0.95;
pub const MIN_GRID: usize = 17;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Background {
    FlatLocal,
    HyperbolicDisk,
}

type PlaneFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// The cubic differential enters only through `|q|²`.
#[derive(Clone)]
pub enum QField {
    ModulusSq(f64),
    /// Exact complex coefficient; `|q|²` is formed in exact arithmetic.
    Exact(GaussianRational),
    /// `|q|²` as a function of Cartesian `(x, y)`.
    ModulusSqFn(PlaneFn),
}

impl QField {
    fn at(&self, x: f64, y: f64) -> f64 {
        match self {
            QField::ModulusSq(c) => *c,
            QField::Exact(q) => q.norm_sqr().to_f64(),
            QField::ModulusSqFn(f) => f(x, y),
        }
    }
}

impl fmt::Debug for QField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QField::ModulusSq(c) => write!(f, "ModulusSq({c})"),
            QField::Exact(q) => write!(f, "Exact({q})"),
            QField::ModulusSqFn(_) => f.write_str("ModulusSqFn(..)"),
        }
    }
}

/// Dirichlet data in polar coordinates `(r, θ)`.
#[derive(Clone)]
pub enum Boundary {
    Constant(f64),
    Polar(PlaneFn),
}

impl Boundary {
    fn at(&self, r: f64, theta: f64) -> f64 {
        match self {
            Boundary::Constant(c) => *c,
            Boundary::Polar(f) => f(r, theta),
        }
    }
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Constant(c) => write!(f, "Constant({c})"),
            Boundary::Polar(_) => f.write_str("Polar(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TzitzeicaProblem {
    pub background: Background,
    pub q: QField,
    pub radius: f64,
    pub grid_n: usize,
    pub boundary: Boundary,
    /// Affine sphere sign; only the hyperbolic case `+1` is supported.
    pub h: i32,
}

impl TzitzeicaProblem {
    pub fn new(background: Background, q: QField, radius: f64, grid_n: usize, boundary: Boundary) -> Self {
        TzitzeicaProblem { background, q, radius, grid_n, boundary, h: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h != 1 {
            return Err(Error::Unsupported(format!("H = {} (only hyperbolic affine spheres, H = 1)", self.h)));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidDomain(format!("radius {} must be positive", self.radius)));
        }
        if self.background == Background::HyperbolicDisk && self.radius > MAX_HYPERBOLIC_RADIUS {
            return Err(Error::InvalidDomain(format!("hyperbolic disk radius {} exceeds {MAX_HYPERBOLIC_RADIUS}", self.radius)));
        }
        if self.grid_n < MIN_GRID || self.grid_n.is_multiple_of(2) {
            return Err(Error::InvalidDomain(format!("grid size {} must be odd and at least {MIN_GRID}", self.grid_n)));
        }
        Ok(())
    }

    /// Node spacing of the square grid on `[−R, R]²`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / (self.grid_n - 1) as f64
    }

    pub fn coord(&self, k: usize) -> f64 {
        -self.radius + k as f64 * self.spacing()
    }

    /// Conformal factor of the background metric at `(x, y)`.
    pub fn lambda(&self, x: f64, y: f64) -> f64 {
        match self.background {
            Background::FlatLocal => 1.0,
            Background::HyperbolicDisk => {
                let s = 1.0 - (x * x + y * y);
                4.0 / (s * s)
            }
        }
    }

    /// Coefficients `(a, A, B, C)` of `a Δu + A e^{−4u} − B e^{2u} + C` at a node.
    fn coefficients(&self, x: f64, y: f64, q_sq: f64) -> (f64, f64, f64, f64) {
        match self.background {
            Background::FlatLocal => (1.0, 8.0 * q_sq, 0.5, 0.0),
            Background::HyperbolicDisk => {
                let l = self.lambda(x, y);
                (2.0 / l, 16.0 * q_sq / (l * l * l), 1.0, 1.0)
            }
        }
    }
}

/// Where a stencil arm ends: an unknown or a boundary crossing.
#[derive(Clone, Copy, Debug)]
enum Arm {
    Node(usize),
    Wall(f64),
}

#[derive(Clone, Debug)]
struct Stencil {
    /// `(arm, distance)` for −x, +x, −y, +y.
    arms: [(Arm, f64); 4],
    a: f64,
    big_a: f64,
    b: f64,
    c: f64,
}

impl Stencil {
    /// Weights of the Shortley-Weller Laplacian for the four arms and the centre.
    fn weights(&self) -> ([f64; 4], f64) {
        let [(_, hl), (_, hr), (_, hd), (_, hu)] = self.arms;
        let w = [2.0 / (hl * (hl + hr)), 2.0 / (hr * (hl + hr)), 2.0 / (hd * (hd + hu)), 2.0 / (hu * (hd + hu))];
        (w, -(2.0 / (hl * hr) + 2.0 / (hd * hu)))
    }
}

/// Interior nodes and their discrete operators.
struct Discretization {
    n: usize,
    /// Grid index (row-major `j * n + i`) of each unknown.
    nodes: Vec<usize>,
    /// Unknown index of each grid node, if interior.
    unknown: Vec<Option<usize>>,
    stencils: Vec<Stencil>,
    bandwidth: usize,
}

impl Discretization {
    fn build(p: &TzitzeicaProblem) -> Self {
        let n = p.grid_n;
        let r = p.radius;
        let h = p.spacing();
        let r2 = r * r;
        let inside = |i: usize, j: usize| {
            let (x, y) = (p.coord(i), p.coord(j));
            x * x + y * y < r2 * (1.0 - 1e-12)
        };
        let mut unknown = vec![None; n * n];
        let mut nodes = Vec::new();
        for j in 0..n {
            for i in 0..n {
                if inside(i, j) {
                    unknown[j * n + i] = Some(nodes.len());
                    nodes.push(j * n + i);
                }
            }
        }
        let mut bandwidth = 0;
        let stencils = nodes
            .iter()
            .enumerate()
            .map(|(k, &g)| {
                let (i, j) = (g % n, g / n);
                let (x, y) = (p.coord(i), p.coord(j));
                let wall_x = (r2 - y * y).max(0.0).sqrt();
                let wall_y = (r2 - x * x).max(0.0).sqrt();
                let mut arm = |ni: usize, nj: usize, dist_to_wall: f64, wx: f64, wy: f64| -> (Arm, f64) {
                    match unknown[nj * n + ni] {
                        Some(idx) if inside(ni, nj) => {
                            bandwidth = bandwidth.max(idx.abs_diff(k));
                            (Arm::Node(idx), h)
                        }
                        _ => {
                            let d = dist_to_wall.min(h).max(f64::MIN_POSITIVE);
                            (Arm::Wall(p.boundary.at(r, wy.atan2(wx))), d)
                        }
                    }
                };
                let arms = [
                    arm(i.wrapping_sub(1).min(n - 1), j, x + wall_x, -wall_x, y),
                    arm((i + 1).min(n - 1), j, wall_x - x, wall_x, y),
                    arm(i, j.wrapping_sub(1).min(n - 1), y + wall_y, x, -wall_y),
                    arm(i, (j + 1).min(n - 1), wall_y - y, x, wall_y),
                ];
                let (a, big_a, b, c) = p.coefficients(x, y, p.q.at(x, y));
                Stencil { arms, a, big_a, b, c }
            })
            .collect();
        Discretization { n, nodes, unknown, stencils, bandwidth }
    }

    fn residual_vec(&self, u: &[f64]) -> Vec<f64> {
        self.stencils
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let (w, centre) = s.weights();
                let mut lap = centre * u[k];
                for (wi, (arm, _)) in w.iter().zip(s.arms) {
                    lap += wi
                        * match arm {
                            Arm::Node(idx) => u[idx],
                            Arm::Wall(v) => v,
                        };
                }
                s.a * lap + s.big_a * (-4.0 * u[k]).exp() - s.b * (2.0 * u[k]).exp() + s.c
            })
            .collect()
    }

    fn jacobian(&self, u: &[f64]) -> BandMatrix {
        let bw = self.bandwidth.max(1);
        let mut jac = BandMatrix::zeros(self.nodes.len(), bw, bw);
        for (k, s) in self.stencils.iter().enumerate() {
            let (w, centre) = s.weights();
            let react = -4.0 * s.big_a * (-4.0 * u[k]).exp() - 2.0 * s.b * (2.0 * u[k]).exp();
            jac.add(k, k, s.a * centre + react);
            for (wi, (arm, _)) in w.iter().zip(s.arms) {
                if let Arm::Node(idx) = arm {
                    jac.add(k, idx, s.a * wi);
                }
            }
        }
        jac
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[derive(Clone, Debug, Serialize)]
pub struct TzitzeicaSolution {
    pub grid_n: usize,
    /// Row-major values `u[j * n + i]` at `(x_i, y_j)`; nodes outside the disk
    /// carry the boundary value at their radial projection.
    pub u: Vec<f64>,
    /// True for interior unknowns.
    pub mask: Vec<bool>,
    pub residual_inf: f64,
    pub newton_iters: usize,
}

impl TzitzeicaSolution {
    pub fn interior(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.u.iter().zip(&self.mask).enumerate().filter(|(_, (_, &m))| m).map(|(i, (&u, _))| (i, u))
    }
}

fn outside_fill(p: &TzitzeicaProblem, i: usize, j: usize) -> f64 {
    let (x, y) = (p.coord(i), p.coord(j));
    p.boundary.at(p.radius, y.atan2(x))
}

fn assemble(p: &TzitzeicaProblem, d: &Discretization, u: &[f64], residual_inf: f64, iters: usize) -> TzitzeicaSolution {
    let n = d.n;
    let mut full = vec![0.0; n * n];
    let mut mask = vec![false; n * n];
    for g in 0..n * n {
        match d.unknown[g] {
            Some(k) => {
                full[g] = u[k];
                mask[g] = true;
            }
            None => full[g] = outside_fill(p, g % n, g / n),
        }
    }
    TzitzeicaSolution { grid_n: n, u: full, mask, residual_inf, newton_iters: iters }
}

/// Newton iteration from `u ≡ 0`.
pub fn solve(p: &TzitzeicaProblem, tol: f64, max_iters: usize) -> Result<TzitzeicaSolution> {
    solve_from(p, tol, max_iters, None)
}

/// Newton iteration from a given full-grid start (interior values are used).
pub fn solve_from(p: &TzitzeicaProblem, tol: f64, max_iters: usize, start: Option<&[f64]>) -> Result<TzitzeicaSolution> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidDomain(format!("tolerance {tol} must be positive")));
    }
    let d = Discretization::build(p);
    let mut u: Vec<f64> = match start {
        Some(s) if s.len() == d.n * d.n => d.nodes.iter().map(|&g| s[g]).collect(),
        Some(s) => return Err(Error::ShapeMismatch { expected: d.n * d.n, found: s.len() }),
        None => vec![0.0; d.nodes.len()],
    };
    if d.stencils.iter().any(|s| !(s.big_a >= 0.0 && s.big_a.is_finite())) {
        return Err(Error::InvalidDomain("|q|^2 must be finite and nonnegative".into()));
    }
    let mut res = d.residual_vec(&u);
    let mut norm = max_abs(&res);
    let mut iters = 0;
    while !(norm < tol) {
        if iters >= max_iters || !norm.is_finite() {
            return Err(Error::NonConvergence { iters, residual: norm });
        }
        let lu = d.jacobian(&u).factor().ok_or(Error::NonConvergence { iters, residual: norm })?;
        let step = lu.solve(&res);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(a, s)| a - t * s).collect();
            let trial_res = d.residual_vec(&trial);
            let trial_norm = max_abs(&trial_res);
            if trial_norm < norm || t < 1e-6 {
                u = trial;
                res = trial_res;
                norm = trial_norm;
                break;
            }
            t *= 0.5;
        }
        iters += 1;
    }
    Ok(assemble(p, &d, &u, norm, iters))
}

/// Max-norm of the discrete operator over interior nodes for a full grid `u`.
pub fn residual(u: &[f64], p: &TzitzeicaProblem) -> Result<f64> {
    p.validate()?;
    let d = Discretization::build(p);
    if u.len() != d.n * d.n {
        return Err(Error::ShapeMismatch { expected: d.n * d.n, found: u.len() });
    }
    let inner: Vec<f64> = d.nodes.iter().map(|&g| u[g]).collect();
    Ok(max_abs(&d.residual_vec(&inner)))
}

/// Conformal factor `e^{2u} λ` of the Blaschke metric at interior nodes.
pub fn blaschke_metric(sol: &TzitzeicaSolution, p: &TzitzeicaProblem) -> Vec<Option<f64>> {
    let n = sol.grid_n;
    sol.u
        .iter()
        .zip(&sol.mask)
        .enumerate()
        .map(|(g, (&u, &m))| m.then(|| (2.0 * u).exp() * p.lambda(p.coord(g % n), p.coord(g / n))))
        .collect()
}

/// Constant solution `u_c = ln(16c)/6` of the flat equation with `|q|² = c > 0`.
pub fn constant_solution(c: f64) -> f64 {
    (16.0 * c).ln() / 6.0
}

/// Amplitude of the smooth manufactured solution.
const MANUFACTURED_AMPLITUDE: f64 = 0.05;

/// `u*(x, y) = 0.1 + 0.05 sin(2x) cos(y)`.
pub fn manufactured_exact(x: f64, y: f64) -> f64 {
    0.1 + MANUFACTURED_AMPLITUDE * (2.0 * x).sin() * y.cos()
}

/// Flat problem on the unit disk whose exact solution is [`manufactured_exact`]:
/// `|q|² = (½e^{2u*} − Δu*) e^{4u*} / 8`, which stays positive.
pub fn manufactured_flat(grid_n: usize) -> TzitzeicaProblem {
    let q_sq = |x: f64, y: f64| {
        let u = manufactured_exact(x, y);
        let lap = -5.0 * MANUFACTURED_AMPLITUDE * (2.0 * x).sin() * y.cos();
        (0.5 * (2.0 * u).exp() - lap) * (4.0 * u).exp() / 8.0
    };
    TzitzeicaProblem::new(
        Background::FlatLocal,
        QField::ModulusSqFn(Arc::new(q_sq)),
        1.0,
        grid_n,
        Boundary::Polar(Arc::new(|r, t| manufactured_exact(r * t.cos(), r * t.sin()))),
    )
}

/// Max-norm distance between a discrete solution and an exact one at interior nodes.
pub fn max_error(sol: &TzitzeicaSolution, p: &TzitzeicaProblem, exact: impl Fn(f64, f64) -> f64) -> f64 {
    let n = sol.grid_n;
    sol.interior().map(|(g, u)| (u - exact(p.coord(g % n), p.coord(g / n))).abs()).fold(0.0, f64::max)
}
