//! Stationary density of the angle φ = 2 arctan z, with γ, j and the
//! boundary/Hilbert-transform identities evaluated from it.
//!
//! The integrated equation (σ_a² f_a/2)′ − v_a f_a = j is solved in the flux
//! variable P = σ_a² f_a/(2j): P′ = 1 + λP with λ = 2v_a/σ_a². On each
//! Gauss–Legendre panel P is propagated exactly through e^{J}, J = ∫λ, and
//! panels are refined until J varies by at most a few units across each.
//! When J(π) > 0 the reflected model is solved instead, so the sweep always
//! runs in the direction in which the homogeneous solution decays.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::coeffs::{build_coefficients, AngularCoefficients};
use crate::error::{Error, Result};
use crate::model::{CharacteristicExponent, DisorderModel, Route};
use crate::specfun::quad::GaussLegendre;
use crate::C64;

const NODES: usize = 16;
/// Largest variation of J accepted on a panel.
const MAX_DJ: f64 = 4.0;
/// |J(π)| below which the zero-current branch is taken.
pub const ZERO_CURRENT_TOL: f64 = 1e-10;
/// Innermost distance to a degenerate endpoint that is resolved.
const X_MIN: f64 = 1e-12;
const MAX_PANELS: usize = 400_000;

/// Sampled stationary angular density on [−π, π].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    /// Increasing sample points; the first and last are −π and π.
    pub phi: Vec<f64>,
    /// Quadrature weights (zero at panel edges).
    pub weight: Vec<f64>,
    pub density: Vec<f64>,
    pub current: f64,
    /// |∫f_a − 1| as recomputed from the samples.
    pub normalization_error: f64,
}

impl DensityProfile {
    pub fn mass(&self) -> f64 {
        self.weight
            .iter()
            .zip(&self.density)
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, f)| w * f)
            .sum()
    }

    /// Cumulative probability at each sample point.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let total = self.mass();
        self.weight
            .iter()
            .zip(&self.density)
            .map(|(&w, &f)| {
                let mass = if w > 0.0 { w * f } else { 0.0 };
                let mid = acc + 0.5 * mass;
                acc += mass;
                mid / total
            })
            .collect()
    }

    /// Kolmogorov–Smirnov distance to a reference CDF on [−π, π].
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        self.phi
            .iter()
            .zip(self.cdf())
            .fold(0.0_f64, |d, (&p, c)| d.max((c - cdf(p)).abs()))
    }

    /// Density of z = tan(φ/2) at the interior samples, f(z) = 2f_a/(1+z²).
    pub fn z_density(&self) -> Vec<(f64, f64)> {
        self.phi
            .iter()
            .zip(&self.density)
            .filter(|(p, _)| p.abs() < PI)
            .map(|(&p, &f)| {
                let z = (0.5 * p).tan();
                (z, 2.0 * f / (1.0 + z * z))
            })
            .collect()
    }

    /// Profile of the reflected model: φ ↦ −φ, j ↦ −j.
    pub fn mirrored(&self) -> Self {
        DensityProfile {
            phi: self.phi.iter().rev().map(|p| -p).collect(),
            weight: self.weight.iter().rev().copied().collect(),
            density: self.density.iter().rev().copied().collect(),
            current: -self.current,
            normalization_error: self.normalization_error,
        }
    }

    fn edge_value(&self) -> f64 {
        0.5 * (self.density[0] + self.density[self.density.len() - 1])
    }
}

struct Kernel {
    ang: AngularCoefficients,
    gl: GaussLegendre,
    cum: Vec<Vec<f64>>,
}

/// Values on one panel: node positions and weights, J at nodes and at b
/// (relative to J(a)), σ_a² and v_a at nodes.
struct PanelData {
    t: [f64; NODES],
    w: [f64; NODES],
    j: [f64; NODES],
    jb: f64,
    sig: [f64; NODES],
    v: [f64; NODES],
}

impl Kernel {
    fn new(m: &DisorderModel) -> Self {
        let gl = GaussLegendre::new(NODES);
        let cum = gl.cumulative_matrix();
        Kernel {
            ang: AngularCoefficients::new(&build_coefficients(m)),
            gl,
            cum,
        }
    }

    fn sigma2(&self, phi: f64) -> [f64; 3] {
        self.ang.sigma2(phi)
    }

    fn drift(&self, phi: f64) -> [f64; 3] {
        self.ang.drift(phi)
    }

    fn lambda(&self, phi: f64) -> f64 {
        2.0 * self.drift(phi)[0] / self.sigma2(phi)[0]
    }

    fn dj(&self, a: f64, b: f64) -> f64 {
        self.gl.integrate(a, b, |t| self.lambda(t))
    }

    fn panel(&self, a: f64, b: f64) -> PanelData {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        let mut d = PanelData {
            t: [0.0; NODES],
            w: [0.0; NODES],
            j: [0.0; NODES],
            jb: 0.0,
            sig: [0.0; NODES],
            v: [0.0; NODES],
        };
        let mut lam = [0.0; NODES];
        for k in 0..NODES {
            d.t[k] = c + h * self.gl.nodes[k];
            d.w[k] = h * self.gl.weights[k];
            d.sig[k] = self.sigma2(d.t[k])[0];
            d.v[k] = self.drift(d.t[k])[0];
            lam[k] = 2.0 * d.v[k] / d.sig[k];
        }
        for k in 0..NODES {
            d.j[k] = h * (0..NODES).map(|i| self.cum[k][i] * lam[i]).sum::<f64>();
        }
        d.jb = (0..NODES).map(|i| d.w[i] * lam[i]).sum();
        d
    }

    /// Splits [lo, hi] into panels on which J varies by at most MAX_DJ,
    /// additionally graded geometrically towards the flagged endpoints.
    fn panels(
        &self,
        lo: f64,
        hi: f64,
        n: usize,
        grade_lo: bool,
        grade_hi: bool,
    ) -> Result<Vec<(f64, f64)>> {
        self.panels_with(lo, hi, n, grade_lo, grade_hi, true)
    }

    fn panels_with(
        &self,
        lo: f64,
        hi: f64,
        n: usize,
        grade_lo: bool,
        grade_hi: bool,
        track_j: bool,
    ) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        let mut stack: Vec<(f64, f64)> = (0..n)
            .rev()
            .map(|i| {
                let a = lo + (hi - lo) * i as f64 / n as f64;
                let b = if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * (i + 1) as f64 / n as f64
                };
                (a, b)
            })
            .collect();
        while let Some((a, b)) = stack.pop() {
            let width = b - a;
            let dist_lo = if grade_lo { a - lo } else { f64::INFINITY };
            let dist_hi = if grade_hi { hi - b } else { f64::INFINITY };
            let dist = dist_lo.min(dist_hi);
            if dist == 0.0 && width <= X_MIN {
                continue; // innermost sliver at a degenerate endpoint
            }
            let m = 0.5 * (a + b);
            let refine = width > 0.5 * dist
                || track_j && {
                    let (l, r) = (self.dj(a, m), self.dj(m, b));
                    let v = l.abs().max(r.abs()).max((l + r).abs());
                    !(v <= MAX_DJ) && width > 1e-13
                };
            if refine {
                stack.push((m, b));
                stack.push((a, m));
            } else {
                out.push((a, b));
            }
            if out.len() + stack.len() > MAX_PANELS {
                return Err(Error::Numerical("density panel budget exhausted".into()));
            }
        }
        Ok(out)
    }
}

/// Which branch of the stationary solution applies.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    /// σ_a² > 0 everywhere.
    Elliptic,
    /// D_αα = 0, ᾱ ≠ 0: the orbit is carried through z = ∞ by the drift.
    Transit,
    /// D_αα = 0, ᾱ = 0: z = ∞ is inaccessible and the current vanishes.
    Natural,
}

fn branch(m: &DisorderModel, k: &Kernel) -> Result<Branch> {
    let scale = m.cov_scale();
    if scale == 0.0 {
        return Err(Error::DegenerateDiffusion("no disorder".into()));
    }
    if m.d_aa() > 1e-12 * scale {
        let n = 8192;
        let samples: Vec<f64> = (0..=n)
            .map(|i| k.sigma2(-PI + 2.0 * PI * i as f64 / n as f64)[0])
            .collect();
        let max = samples.iter().cloned().fold(0.0, f64::max);
        let min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min > 1e-10 * max) {
            return Err(Error::DegenerateDiffusion(
                "σ_a² vanishes inside (−π, π)".into(),
            ));
        }
        return Ok(Branch::Elliptic);
    }
    // D_αα = 0: σ² = D_uu + 4D_wu z + 4D_ww z² must stay positive on ℝ
    let (dww, duu, dwu) = (m.d_ww(), m.d_uu(), m.d_wu());
    let positive = duu > 1e-12 * scale
        && (dwu * dwu < dww * duu * (1.0 - 1e-9)
            || (dww.abs() <= 1e-12 * scale && dwu.abs() <= 1e-12 * scale));
    if !positive {
        return Err(Error::DegenerateDiffusion(
            "σ² vanishes at a finite z".into(),
        ));
    }
    if m.means.alpha.abs() > 1e-14 * m.mean_scale().max(scale) {
        Ok(Branch::Transit)
    } else {
        Ok(Branch::Natural)
    }
}

struct Sampled {
    phi: Vec<f64>,
    weight: Vec<f64>,
    density: Vec<f64>,
    current: f64,
    extra_mass: f64,
}

impl Sampled {
    fn finish(self) -> DensityProfile {
        let mut d = DensityProfile {
            phi: self.phi,
            weight: self.weight,
            density: self.density,
            current: self.current,
            normalization_error: 0.0,
        };
        d.normalization_error = (d.mass() + self.extra_mass - 1.0).abs();
        d
    }
}

/// Stationary density; `grid_size` sets the base resolution (nodes before
/// adaptive refinement).
pub fn stationary_density(m: &DisorderModel, grid_size: usize) -> Result<DensityProfile> {
    m.validate()?;
    let n = (grid_size / NODES).max(8);
    let k = Kernel::new(m);
    match branch(m, &k)? {
        Branch::Elliptic => {
            let jpi = k
                .panels(-PI, PI, n, false, false)?
                .iter()
                .map(|&(a, b)| k.dj(a, b))
                .sum::<f64>();
            if jpi.abs() < ZERO_CURRENT_TOL {
                zero_current(&k, n, false)
            } else if jpi > 0.0 {
                let r = m.reflected();
                let kr = Kernel::new(&r);
                Ok(periodic_sweep(&kr, n)?.mirrored())
            } else {
                periodic_sweep(&k, n)
            }
        }
        Branch::Transit => {
            if m.means.alpha < 0.0 {
                let r = m.reflected();
                let kr = Kernel::new(&r);
                Ok(transit_sweep(&kr, n)?.mirrored())
            } else {
                transit_sweep(&k, n)
            }
        }
        Branch::Natural => zero_current(&k, n, true),
    }
}

/// f_a = C e^{J}/σ_a², j = 0.
fn zero_current(k: &Kernel, n: usize, graded: bool) -> Result<DensityProfile> {
    let mut panels = k.panels(-PI, 0.0, n.div_ceil(2), graded, false)?;
    panels.extend(k.panels(0.0, PI, n.div_ceil(2), false, graded)?);
    let mut phi = vec![panels[0].0];
    let mut weight = vec![0.0];
    let mut logf = vec![f64::NAN];
    let mut ja = 0.0;
    for &(a, b) in &panels {
        let d = k.panel(a, b);
        for i in 0..NODES {
            phi.push(d.t[i]);
            weight.push(d.w[i]);
            logf.push(ja + d.j[i] - d.sig[i].ln());
        }
        ja += d.jb;
        phi.push(b);
        weight.push(0.0);
        logf.push(f64::NAN);
    }
    let top = logf
        .iter()
        .cloned()
        .filter(|x| x.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut density: Vec<f64> = logf.iter().map(|l| (l - top).exp()).collect();
    // edge samples: f at panel boundaries by the same formula
    let mut jb = 0.0;
    let mut idx = 0;
    for &(a, b) in &panels {
        if idx == 0 {
            density[0] = boundary_value(k, a, 0.0 - top);
        }
        jb += k.panel(a, b).jb;
        idx += NODES + 1;
        density[idx] = boundary_value(k, b, jb - top);
    }
    let mut extra = 0.0;
    if graded {
        // power-law tails inside the innermost distance X_MIN
        for side in [0, 1] {
            let (i1, i2) = if side == 0 {
                (1, 2)
            } else {
                (phi.len() - 2, phi.len() - 3)
            };
            let x1 = if side == 0 {
                phi[i1] + PI
            } else {
                PI - phi[i1]
            };
            let x2 = if side == 0 {
                phi[i2] + PI
            } else {
                PI - phi[i2]
            };
            let beta = (density[i2] / density[i1]).ln() / (x2 / x1).ln();
            if !(beta > -1.0) {
                return Err(Error::Domain(
                    "stationary density is not normalisable".into(),
                ));
            }
            let edge = if side == 0 {
                phi[0] + PI
            } else {
                PI - phi[phi.len() - 1]
            };
            let f_edge = density[i1] * (edge / x1).powf(beta);
            extra += f_edge * edge / (beta + 1.0);
            let end = if side == 0 { 0 } else { phi.len() - 1 };
            density[end] = if beta > 1e-6 {
                0.0
            } else if beta < -1e-6 {
                f64::INFINITY
            } else {
                f_edge
            };
        }
        phi[0] = -PI;
        let last = phi.len() - 1;
        phi[last] = PI;
    }
    let mass: f64 = weight
        .iter()
        .zip(&density)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, f)| w * f)
        .sum::<f64>()
        + extra;
    density.iter_mut().for_each(|f| *f /= mass);
    Ok(Sampled {
        phi,
        weight,
        density,
        current: 0.0,
        extra_mass: extra / mass,
    }
    .finish())
}

fn boundary_value(k: &Kernel, phi: f64, logc: f64) -> f64 {
    let s = k.sigma2(phi)[0];
    if s > 0.0 {
        (logc - s.ln()).exp()
    } else {
        f64::NAN
    }
}

/// Propagates A = P/j across a panel; returns A at the nodes and at b.
fn propagate(k: &Kernel, d: &PanelData, a0: f64) -> ([f64; NODES], f64) {
    let e: Vec<f64> = d.j.iter().map(|j| (-j).exp()).collect();
    let mut out = [0.0; NODES];
    let h = 0.5 * (d.t[NODES - 1] - d.t[0]) / k.gl.nodes[NODES - 1];
    for i in 0..NODES {
        let integral = h * (0..NODES).map(|l| k.cum[i][l] * e[l]).sum::<f64>();
        out[i] = d.j[i].exp() * (a0 + integral);
    }
    let total: f64 = (0..NODES).map(|l| d.w[l] * e[l]).sum();
    (out, d.jb.exp() * (a0 + total))
}

/// Nonzero current with J(π) < 0: A(φ) = ∫_{−∞}^{φ} e^{J(φ)−J(t)} dt over the
/// quasi-periodic extension of J.
fn periodic_sweep(k: &Kernel, n: usize) -> Result<DensityProfile> {
    let panels = k.panels(-PI, PI, n, false, false)?;
    let data: Vec<PanelData> = panels.iter().map(|&(a, b)| k.panel(a, b)).collect();
    let sweep = |a0: f64| -> (Vec<f64>, Vec<f64>, f64) {
        let mut nodes = Vec::with_capacity(data.len() * NODES);
        let mut edges = vec![a0];
        let mut a = a0;
        for d in &data {
            let (vals, end) = propagate(k, d, a);
            nodes.extend_from_slice(&vals);
            edges.push(end);
            a = end;
        }
        (nodes, edges, a)
    };
    let jpi: f64 = data.iter().map(|d| d.jb).sum();
    let (_, _, w) = sweep(0.0);
    let a_start = w / (1.0 - jpi.exp());
    let (nodes, edges, _) = sweep(a_start);
    let mut phi = vec![-PI];
    let mut weight = vec![0.0];
    let mut dens = vec![2.0 * edges[0] / k.sigma2(-PI)[0]];
    for (p, d) in data.iter().enumerate() {
        for i in 0..NODES {
            phi.push(d.t[i]);
            weight.push(d.w[i]);
            dens.push(2.0 * nodes[p * NODES + i] / d.sig[i]);
        }
        let b = panels[p].1;
        phi.push(b);
        weight.push(0.0);
        dens.push(2.0 * edges[p + 1] / k.sigma2(b)[0]);
    }
    let mass: f64 = weight.iter().zip(&dens).map(|(w, f)| w * f).sum();
    let j = 1.0 / mass;
    dens.iter_mut().for_each(|f| *f *= j);
    Ok(Sampled {
        phi,
        weight,
        density: dens,
        current: j,
        extra_mass: 0.0,
    }
    .finish())
}

/// D_αα = 0 and ᾱ > 0: f_a(±π) = −j/v_a(±π) and the solution is the one that
/// leaves the degenerate point smoothly.
fn transit_sweep(k: &Kernel, n: usize) -> Result<DensityProfile> {
    // two-term quasi-steady density per unit current near the endpoints
    let asym = |phi: f64| -> (f64, f64) {
        let [s, s1, _] = k.sigma2(phi);
        let [v, v1, _] = k.drift(phi);
        let corr = (v1 * s - v * s1) / (2.0 * v * v * v);
        (-1.0 / v + corr, (corr * v).abs())
    };
    let mut xq = 0.5;
    while asym(-PI + xq).1.max(asym(PI - xq).1) > 1e-4 {
        xq *= 0.5;
        if xq < 1e-9 {
            return Err(Error::Numerical("quasi-steady region not reached".into()));
        }
    }
    let left = k.panels_with(-PI, -PI + xq, 4, true, false, false)?;
    let mid = k.panels(-PI + xq, PI - xq, n, false, false)?;
    let right = k.panels_with(PI - xq, PI, 4, false, true, false)?;
    let mut phi = vec![-PI];
    let mut weight = vec![0.0];
    let mut dens = vec![-1.0 / k.drift(-PI)[0]];
    let push_asym =
        |list: &[(f64, f64)], phi: &mut Vec<f64>, weight: &mut Vec<f64>, dens: &mut Vec<f64>| {
            for &(a, b) in list {
                let h = 0.5 * (b - a);
                for i in 0..NODES {
                    let t = 0.5 * (a + b) + h * k.gl.nodes[i];
                    phi.push(t);
                    weight.push(h * k.gl.weights[i]);
                    dens.push(asym(t).0);
                }
                phi.push(b);
                weight.push(0.0);
                dens.push(asym(b).0);
            }
        };
    push_asym(&left, &mut phi, &mut weight, &mut dens);
    let start = -PI + xq;
    let mut a = asym(start).0 * k.sigma2(start)[0] / 2.0;
    for &(pa, pb) in &mid {
        let d = k.panel(pa, pb);
        let (vals, end) = propagate(k, &d, a);
        for i in 0..NODES {
            phi.push(d.t[i]);
            weight.push(d.w[i]);
            dens.push(2.0 * vals[i] / d.sig[i]);
        }
        phi.push(pb);
        weight.push(0.0);
        dens.push(2.0 * end / k.sigma2(pb)[0]);
        a = end;
    }
    push_asym(&right, &mut phi, &mut weight, &mut dens);
    let last = phi.len() - 1;
    phi[last] = PI;
    dens[last] = -1.0 / k.drift(PI)[0];
    // order: the left graded panels come out innermost-first already
    let mass: f64 = weight.iter().zip(&dens).map(|(w, f)| w * f).sum();
    let j = 1.0 / mass;
    dens.iter_mut().for_each(|f| *f *= j);
    Ok(Sampled {
        phi,
        weight,
        density: dens,
        current: j,
        extra_mass: 0.0,
    }
    .finish())
}

/// f_a′ from the stationary equation at a point with σ_a² > 0.
fn slope(k: &Kernel, phi: f64, f: f64, j: f64) -> f64 {
    let [s, s1, _] = k.sigma2(phi);
    let v = k.drift(phi)[0];
    (2.0 * (j + v * f) - s1 * f) / s
}

/// γ = −w̄ + D_αu + (ᾱ + 2D_αw) PV∫z f + ½D_αα PV∫z [(1+z²) f]′, evaluated in φ.
pub fn gamma_from_density(m: &DisorderModel, d: &DensityProfile) -> Result<f64> {
    let (a, w) = (m.means.alpha, m.means.w);
    let c1 = a + 2.0 * m.d_aw();
    let mut gamma = -w + m.d_au();
    let nodes = || {
        d.phi
            .iter()
            .zip(&d.weight)
            .zip(&d.density)
            .filter(|((_, w), _)| **w > 0.0)
    };
    if c1 != 0.0 {
        let fpi = d.edge_value();
        if !fpi.is_finite() {
            return Err(Error::Numerical("density is singular at φ = ±π".into()));
        }
        let i1: f64 = nodes()
            .map(|((p, w), f)| w * (0.5 * p).tan() * (f - fpi))
            .sum();
        gamma += c1 * i1;
    }
    if m.d_aa() > 0.0 {
        let k = Kernel::new(m);
        let fpi = d.edge_value();
        let spi = slope(&k, PI, fpi, d.current);
        let i2: f64 = nodes()
            .map(|((p, w), f)| w * (0.5 * p).tan() * (slope(&k, *p, *f, d.current) - spi))
            .sum();
        gamma += m.d_aa() * i2;
    }
    Ok(gamma)
}

/// |2D_αα f_a′(±π) + 2(ᾱ + 2D_αw) f_a(±π) − j|, with the boundary value and
/// slope read off a least-squares fit to the samples around φ = ±π.
pub fn rice_residual(m: &DisorderModel, d: &DensityProfile) -> Result<f64> {
    if m.d_aa() <= 0.0 && m.means.alpha == 0.0 {
        return Err(Error::NotApplicable(
            "Rice identity needs D_αα > 0 or ᾱ ≠ 0".into(),
        ));
    }
    let (fpi, dfpi) = edge_fit(d)?;
    Ok((2.0 * m.d_aa() * dfpi + 2.0 * (m.means.alpha + 2.0 * m.d_aw()) * fpi - d.current).abs())
}

/// Least-squares polynomial fit of f_a in x = φ − π (left samples shifted
/// by 2π); returns the value and slope at x = 0.
fn edge_fit(d: &DensityProfile) -> Result<(f64, f64)> {
    const REACH: f64 = 0.4;
    const DEGREE: usize = 10;
    let pts: Vec<(f64, f64)> = d
        .phi
        .iter()
        .zip(&d.density)
        .filter_map(|(&p, &f)| {
            let x = if p < 0.0 { p + PI } else { p - PI };
            (x.abs() <= REACH && f.is_finite()).then_some((x / REACH, f))
        })
        .collect();
    if pts.len() < 2 * DEGREE {
        return Err(Error::Numerical("too few samples near φ = ±π".into()));
    }
    // Chebyshev basis keeps the normal equations well conditioned
    let a = DMatrix::from_fn(pts.len(), DEGREE + 1, |i, k| {
        (k as f64 * pts[i].0.acos()).cos()
    });
    let b = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let c = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Numerical(format!("edge fit: {e}")))?;
    // T_k(0) and T_k′(0)
    let value: f64 = (0..=DEGREE)
        .map(|k| c[k] * (k as f64 * PI / 2.0).cos())
        .sum();
    let slope: f64 = (0..=DEGREE)
        .map(|k| c[k] * k as f64 * (k as f64 * PI / 2.0).sin())
        .sum();
    Ok((value, slope / REACH))
}

/// F(y) = ∫ f(z)/(y − z) dz and F′(y) from the samples.
pub fn hilbert_transform(d: &DensityProfile, y: C64) -> (C64, C64) {
    let mut f = C64::new(0.0, 0.0);
    let mut df = C64::new(0.0, 0.0);
    for ((&p, &w), &fa) in d.phi.iter().zip(&d.weight).zip(&d.density) {
        if w > 0.0 {
            let r = 1.0 / (y - (0.5 * p).tan());
            f += w * fa * r;
            df -= w * fa * r * r;
        }
    }
    (f, df)
}

/// max over probes of |Q F′ + R F − S − 2Ω|.
pub fn hilbert_residual(
    m: &DisorderModel,
    d: &DensityProfile,
    omega: C64,
    probes: &[C64],
) -> Result<f64> {
    let c = build_coefficients(m);
    let (r, s) = (c.r(), c.s());
    let mut worst = 0.0_f64;
    for &y in probes {
        if !(y.im <= -0.1) {
            return Err(Error::Domain(
                "Hilbert probes must satisfy Im y ≤ −0.1".into(),
            ));
        }
        let (f, df) = hilbert_transform(d, y);
        let res = c.q.eval_c(y) * df + r.eval_c(y) * f - s.eval_c(y) - 2.0 * omega;
        worst = worst.max(res.norm());
    }
    Ok(worst)
}

/// Ω = γ + iπj from the stationary density.
pub fn omega_fp(m: &DisorderModel, grid_size: usize) -> Result<CharacteristicExponent> {
    if commuting_diagonal(m) {
        // point mass at z = 0 or z = ∞
        return Ok(CharacteristicExponent::new(
            C64::new(m.means.w.abs(), 0.0),
            Route::FokkerPlanck,
        ));
    }
    let d = stationary_density(m, grid_size)?;
    let g = gamma_from_density(m, &d)?;
    Ok(CharacteristicExponent::new(
        C64::new(g, PI * d.current),
        Route::FokkerPlanck,
    ))
}

fn commuting_diagonal(m: &DisorderModel) -> bool {
    let mut c = m.cov;
    c[1][1] = 0.0;
    m.means.alpha == 0.0 && m.means.u == 0.0 && c.iter().flatten().all(|&x| x == 0.0)
}
