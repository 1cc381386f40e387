//! Monte Carlo estimates of γ and j from explicit matrix products and from
//! the continuum stochastic differential equation.
//!
//! The working vector v = (v₁, v₂) represents the Riccati variable
//! z = v₁/v₂. Its polar angle θ increases under a positive rotation, so a
//! passage of z from −∞ to +∞ is a crossing of θ through a multiple of π, and
//! the angle of the density is φ = 2 arctan z = π − 2θ (mod 2π).

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_solver::DensityProfile;
use crate::model::{CharacteristicExponent, DisorderModel, Route};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    /// Steps per replica, burn-in included.
    pub n_steps: u64,
    pub n_replicas: usize,
    pub seed: u64,
    /// Steps between renormalisations of the working vector.
    pub renorm_interval: u64,
    /// Discarded initial steps; `None` means 10% of `n_steps`.
    pub burn_in: Option<u64>,
    /// Products: every parameter is multiplied by this factor per step.
    /// SDE: time step in units of the inverse model scale.
    pub step_scale: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_steps: 1_000_000,
            n_replicas: 16,
            seed: 1,
            renorm_interval: 16,
            burn_in: None,
            step_scale: 1e-3,
        }
    }
}

impl McConfig {
    pub fn burn_in_steps(&self) -> u64 {
        self.burn_in.unwrap_or(self.n_steps / 10)
    }

    fn validate(&self) -> Result<()> {
        if self.n_replicas < 2 {
            return Err(Error::Config(
                "at least two replicas are needed for an error bar".into(),
            ));
        }
        if self.renorm_interval == 0 {
            return Err(Error::Config("renorm_interval must be positive".into()));
        }
        if self.burn_in_steps() >= self.n_steps {
            return Err(Error::Config("burn-in leaves no measured steps".into()));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::Config("step_scale must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub gamma: f64,
    pub gamma_stderr: f64,
    pub j: f64,
    pub j_stderr: f64,
    /// Measured steps summed over replicas.
    pub samples: u64,
    pub replicas: usize,
}

impl McEstimate {
    pub fn exponent(&self, route: Route) -> CharacteristicExponent {
        CharacteristicExponent::new(C64::new(self.gamma, PI * self.j), route)
    }

    fn from_replicas(per: &[(f64, f64)], samples: u64) -> Self {
        let n = per.len() as f64;
        let mean = |k: fn(&(f64, f64)) -> f64| per.iter().map(k).sum::<f64>() / n;
        let (g, j) = (mean(|p| p.0), mean(|p| p.1));
        let se = |k: fn(&(f64, f64)) -> f64, m: f64| {
            (per.iter().map(|p| (k(p) - m).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
        };
        McEstimate {
            gamma: g,
            gamma_stderr: se(|p| p.0, g),
            j,
            j_stderr: se(|p| p.1, j),
            samples,
            replicas: per.len(),
        }
    }
}

/// Symmetric square root of a PSD covariance, negative rounding clipped.
fn sqrt_cov(cov: &Matrix3<f64>) -> Matrix3<f64> {
    let e = SymmetricEigen::new(*cov);
    let d = Matrix3::from_diagonal(&e.eigenvalues.map(|l| l.max(0.0).sqrt()));
    e.eigenvectors * d * e.eigenvectors.transpose()
}

fn rng_for(seed: u64, replica: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica as u64);
    rng
}

fn gaussian3(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    Vector3::new(
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
        StandardNormal.sample(rng),
    )
}

/// Wraps an angle difference into (−π, π].
fn wrap(d: f64) -> f64 {
    d - 2.0 * PI * ((d + PI) / (2.0 * PI)).ceil() + 2.0 * PI
}

/// φ = π − 2θ reduced to (−π, π].
fn phi_of_theta(theta: f64) -> f64 {
    wrap(PI - 2.0 * theta)
}

/// Accumulated log-norm and winding of one replica.
struct Walker {
    v: [f64; 2],
    log_norm: f64,
    theta: f64,
}

impl Walker {
    fn new() -> Self {
        // start away from the special directions of the clean flow
        let v = [0.6, 0.8];
        Walker {
            v,
            log_norm: 0.0,
            theta: v[1].atan2(v[0]),
        }
    }

    /// v ← rot(α) diag(e^w, e^{−w}) shear(u) v, tracking the unwrapped angle.
    fn step(&mut self, alpha: f64, w: f64, u: f64) {
        let [mut x, mut y] = self.v;
        x += u * y;
        x *= w.exp();
        y *= (-w).exp();
        let (s, c) = alpha.sin_cos();
        self.v = [c * x - s * y, s * x + c * y];
        let theta = self.v[1].atan2(self.v[0]);
        self.theta += wrap(theta - wrap(self.theta));
    }

    fn renormalize(&mut self) {
        let n = self.v[0].hypot(self.v[1]);
        self.log_norm += n.ln();
        self.v = [self.v[0] / n, self.v[1] / n];
    }

    fn total_log_norm(&self) -> f64 {
        self.log_norm + self.v[0].hypot(self.v[1]).ln()
    }

    fn crossings(&self) -> f64 {
        (self.theta / PI).floor()
    }
}

struct ReplicaOutput {
    gamma: f64,
    j: f64,
    angles: Vec<f64>,
}

/// Runs one replica of the discrete product; `keep_every` > 0 records φ
/// every that many measured steps.
fn run_product(
    m: &DisorderModel,
    cfg: &McConfig,
    replica: usize,
    keep_every: u64,
) -> ReplicaOutput {
    let s = cfg.step_scale;
    let scaled = m.scaled(s);
    let l = sqrt_cov(&scaled.cov_matrix());
    let mean = Vector3::from(scaled.means.as_array());
    let noisy = l.iter().any(|&x| x != 0.0);
    let mut rng = rng_for(cfg.seed, replica);
    let mut walker = Walker::new();
    let burn = cfg.burn_in_steps();
    let (mut g0, mut c0) = (0.0, 0.0);
    let mut angles = Vec::new();
    for n in 0..cfg.n_steps {
        if n == burn {
            walker.renormalize();
            g0 = walker.log_norm;
            c0 = walker.crossings();
        }
        let p = if noisy {
            mean + l * gaussian3(&mut rng)
        } else {
            mean
        };
        walker.step(p[0], p[1], p[2]);
        if (n + 1) % cfg.renorm_interval == 0 {
            walker.renormalize();
        }
        if keep_every > 0 && n >= burn && (n - burn) % keep_every == 0 {
            angles.push(phi_of_theta(walker.v[1].atan2(walker.v[0])));
        }
    }
    let t = (cfg.n_steps - burn) as f64 * s;
    ReplicaOutput {
        gamma: (walker.total_log_norm() - g0) / t,
        j: (walker.crossings() - c0) / t,
        angles,
    }
}

fn run_replicas<F>(cfg: &McConfig, f: F) -> Result<(McEstimate, Vec<f64>)>
where
    F: Fn(usize) -> Result<ReplicaOutput> + Sync,
{
    cfg.validate()?;
    let outs: Vec<ReplicaOutput> = (0..cfg.n_replicas)
        .into_par_iter()
        .map(&f)
        .collect::<Result<_>>()?;
    let per: Vec<(f64, f64)> = outs.iter().map(|o| (o.gamma, o.j)).collect();
    let samples = (cfg.n_steps - cfg.burn_in_steps()) * cfg.n_replicas as u64;
    let angles = outs.into_iter().flat_map(|o| o.angles).collect();
    Ok((McEstimate::from_replicas(&per, samples), angles))
}

/// γ̂ and ĵ of the product of matrices drawn from `m.scaled(step_scale)`,
/// divided by `step_scale`.
pub fn simulate_product(m: &DisorderModel, cfg: &McConfig) -> Result<McEstimate> {
    m.validate()?;
    Ok(run_replicas(cfg, |r| Ok(run_product(m, cfg, r, 0)))?.0)
}

pub fn simulate_lyapunov(m: &DisorderModel, cfg: &McConfig) -> Result<McEstimate> {
    simulate_product(m, cfg)
}

pub fn simulate_rotation_number(m: &DisorderModel, cfg: &McConfig) -> Result<McEstimate> {
    simulate_product(m, cfg)
}

/// Stationary samples of φ = 2 arctan z from the discrete product, thinned
/// so that about `n_samples` are returned.
pub fn sample_angles(m: &DisorderModel, cfg: &McConfig, n_samples: usize) -> Result<Vec<f64>> {
    m.validate()?;
    let measured = (cfg.n_steps - cfg.burn_in_steps().min(cfg.n_steps)) * cfg.n_replicas as u64;
    let keep = (measured / n_samples.max(1) as u64).max(1);
    Ok(run_replicas(cfg, |r| Ok(run_product(m, cfg, r, keep)))?.1)
}

/// Normalised histogram of stationary φ samples with `bins` equal bins.
pub fn empirical_density(m: &DisorderModel, cfg: &McConfig, bins: usize) -> Result<DensityProfile> {
    let angles = sample_angles(m, cfg, 200 * bins.max(1))?;
    histogram(&angles, bins)
}

pub fn histogram(angles: &[f64], bins: usize) -> Result<DensityProfile> {
    if bins == 0 || angles.is_empty() {
        return Err(Error::Config("empty histogram".into()));
    }
    let width = 2.0 * PI / bins as f64;
    let mut counts = vec![0u64; bins];
    for &p in angles {
        let k = (((p + PI) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = angles.len() as f64;
    Ok(DensityProfile {
        phi: (0..bins).map(|k| -PI + (k as f64 + 0.5) * width).collect(),
        weight: vec![width; bins],
        density: counts.iter().map(|&c| c as f64 / (total * width)).collect(),
        current: f64::NAN,
        normalization_error: 0.0,
    })
}

/// Kolmogorov–Smirnov statistic of samples against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0_f64, |d, (i, &x)| {
        let c = cdf(x);
        d.max((c - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - c).abs())
    })
}

/// Generators of rotation, stretch and shear.
const GEN_A: [[f64; 2]; 2] = [[0.0, -1.0], [1.0, 0.0]];
const GEN_B: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];
const GEN_C: [[f64; 2]; 2] = [[0.0, 1.0], [0.0, 0.0]];

fn combo(a: f64, b: f64, c: f64) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            out[i][k] = a * GEN_A[i][k] + b * GEN_B[i][k] + c * GEN_C[i][k];
        }
    }
    out
}

/// Stratonovich drift matrix of the continuum flow, including the ordering
/// corrections ½(D_αw[A,B] + D_αu[A,C] + D_wu[B,C]).
pub fn sde_drift(m: &DisorderModel) -> [[f64; 2]; 2] {
    let mut k = combo(m.means.alpha, m.means.w, m.means.u);
    // [A,B] = [[0,2],[2,0]], [A,C] = −B, [B,C] = 2C
    let (daw, dau, dwu) = (m.d_aw(), m.d_au(), m.d_wu());
    k[0][1] += daw;
    k[1][0] += daw;
    k[0][0] -= 0.5 * dau;
    k[1][1] += 0.5 * dau;
    k[0][1] += dwu;
    k
}

/// (dθ, d ln r) produced by the generator X at angle θ.
fn polar_rate(x: &[[f64; 2]; 2], theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let xr = [x[0][0] * c + x[0][1] * s, x[1][0] * c + x[1][1] * s];
    (-s * xr[0] + c * xr[1], c * xr[0] + s * xr[1])
}

fn run_sde(
    m: &DisorderModel,
    cfg: &McConfig,
    replica: usize,
    keep_every: u64,
) -> Result<ReplicaOutput> {
    let scale = m.mean_scale().max(m.cov_scale());
    let dx = if scale > 0.0 {
        cfg.step_scale / scale
    } else {
        cfg.step_scale
    };
    let kd = sde_drift(m);
    let l = sqrt_cov(&m.cov_matrix());
    let sq = dx.sqrt();
    let mut rng = rng_for(cfg.seed, replica);
    let mut theta = 0.8_f64.atan2(0.6);
    let mut rho = 0.0;
    let burn = cfg.burn_in_steps();
    let (mut t0, mut r0) = (theta, rho);
    let mut angles = Vec::new();
    for n in 0..cfg.n_steps {
        if n == burn {
            t0 = theta;
            r0 = rho;
        }
        let dw = l * gaussian3(&mut rng) * sq;
        let mut x = combo(dw[0], dw[1], dw[2]);
        for i in 0..2 {
            for k in 0..2 {
                x[i][k] += kd[i][k] * dx;
            }
        }
        let (d1, r1) = polar_rate(&x, theta);
        let (d2, r2) = polar_rate(&x, theta + d1);
        let dtheta = 0.5 * (d1 + d2);
        if !(dtheta.abs() <= 0.5 * PI) {
            return Err(Error::Numerical(format!(
                "SDE step moved φ by {:.3} at step {n}; reduce step_scale (now {})",
                2.0 * dtheta.abs(),
                cfg.step_scale
            )));
        }
        theta += dtheta;
        rho += 0.5 * (r1 + r2);
        if keep_every > 0 && n >= burn && (n - burn) % keep_every == 0 {
            angles.push(phi_of_theta(theta));
        }
    }
    let t = (cfg.n_steps - burn) as f64 * dx;
    let crossings = (theta / PI).floor() - (t0 / PI).floor();
    Ok(ReplicaOutput {
        gamma: (rho - r0) / t,
        j: crossings / t,
        angles,
    })
}

/// Heun integration of the Riccati SDE in polar form; returns the estimate
/// and a `bins`-bin histogram of φ.
pub fn simulate_sde(
    m: &DisorderModel,
    cfg: &McConfig,
    bins: usize,
) -> Result<(McEstimate, DensityProfile)> {
    m.validate()?;
    let measured = cfg.n_steps.saturating_sub(cfg.burn_in_steps());
    let keep = (measured / (200 * bins.max(1) as u64 / cfg.n_replicas.max(1) as u64).max(1)).max(1);
    let (est, angles) = run_replicas(cfg, |r| run_sde(m, cfg, r, keep))?;
    Ok((est, histogram(&angles, bins)?))
}
