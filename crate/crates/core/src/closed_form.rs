//! Closed-form scaling formulas for Ω, one per disorder family.
//!
//! Dispatch is structural: the vanishing pattern of the covariance matrix and
//! of the means selects the family, and the zero pattern of Q is consulted
//! only for the generic case. Families whose formula assumes ᾱ > 0 are
//! evaluated on the reflected model z → −z and conjugated back.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::coeffs::{build_coefficients, classify_zeros, exponents, ZeroLabel};
use crate::error::{Error, Result};
use crate::model::DisorderModel;
use crate::sl2::{mu_continuum, mu_squared};
use crate::specfun::{
    airy_log_derivative, bessel_h2, bessel_i, bessel_k, elliptic_ke, hyp2f1, whittaker_w,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    None,
    Airy,
    BesselK,
    BesselJn,
    BesselIImag,
    Whittaker,
    EllipticI,
    EllipticII,
    Hypergeometric,
}

impl Family {
    /// Special-function label of the classification table.
    pub fn label(&self) -> &'static str {
        match self {
            Family::None => "none",
            Family::Airy => "Airy",
            Family::BesselK | Family::BesselJn => "Bessel (real index)",
            Family::BesselIImag => "Bessel (imaginary index)",
            Family::Whittaker => "Whittaker",
            Family::EllipticI | Family::EllipticII => "elliptic",
            Family::Hypergeometric => "hypergeometric",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::None => "none",
            Family::Airy => "airy",
            Family::BesselK => "bessel_K",
            Family::BesselJn => "bessel_JN",
            Family::BesselIImag => "bessel_I_imag",
            Family::Whittaker => "whittaker",
            Family::EllipticI => "elliptic_I",
            Family::EllipticII => "elliptic_II",
            Family::Hypergeometric => "hypergeometric",
        }
    }
}

/// The scaling variables of one closed-form evaluation:
/// Ω = prefactor · G(x) + offset, conjugated when `conjugated` is set.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingEvaluation {
    pub family: Family,
    /// Argument of the scaling function (x, ζ, k or k̂).
    pub x: C64,
    /// Named indices (ν, λ, l, m, a₁, a₂, a₃).
    pub indices: Vec<(&'static str, C64)>,
    pub g: C64,
    pub prefactor: C64,
    pub offset: C64,
    /// True when the formula was applied to the reflected model.
    pub conjugated: bool,
    pub omega: C64,
}

impl ScalingEvaluation {
    fn new(
        family: Family,
        x: C64,
        indices: Vec<(&'static str, C64)>,
        prefactor: C64,
        offset: C64,
    ) -> Result<Self> {
        let mut e = ScalingEvaluation {
            family,
            x,
            indices,
            g: C64::new(0.0, 0.0),
            prefactor,
            offset,
            conjugated: false,
            omega: C64::new(0.0, 0.0),
        };
        e.g = e.g_at(x)?;
        e.omega = prefactor * e.g + offset;
        Ok(e)
    }

    fn conj(mut self) -> Self {
        self.conjugated = !self.conjugated;
        self.omega = self.omega.conj();
        self
    }

    pub fn index(&self, name: &str) -> C64 {
        self.indices
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or_default()
    }

    /// The family's scaling function at another argument, same indices.
    pub fn g_at(&self, x: C64) -> Result<C64> {
        match self.family {
            Family::None => Ok(C64::new(1.0, 0.0)),
            Family::Airy => Ok(airy_log_derivative(x.re)),
            Family::BesselK => g_bessel_k(self.index("nu").re, x.re),
            Family::BesselJn => g_bessel_jn(self.index("nu").re, x.re),
            Family::BesselIImag => g_bessel_i(self.index("lambda").re, x.re),
            Family::Whittaker => g_whittaker(self.index("l"), self.index("m"), x),
            Family::EllipticI => g_elliptic_1(x.re),
            Family::EllipticII => g_elliptic_2(x.re),
            Family::Hypergeometric => {
                g_hyp(self.index("a1"), self.index("a2"), self.index("a3"), x.re)
            }
        }
    }
}

/// −x K′_ν(x)/K_ν(x), with the x → 0 limit |ν|.
fn g_bessel_k(nu: f64, x: f64) -> Result<C64> {
    if x == 0.0 {
        return Ok(C64::new(nu.abs(), 0.0));
    }
    let k = bessel_k(nu, C64::new(x, 0.0))?;
    Ok(-x * k.log_derivative())
}

/// −ζ (J′_ν − iN′_ν)/(J_ν − iN_ν).
fn g_bessel_jn(nu: f64, zeta: f64) -> Result<C64> {
    if zeta == 0.0 {
        return Ok(C64::new(nu.abs(), 0.0));
    }
    let h = bessel_h2(nu, zeta)?;
    Ok(-zeta * h.log_derivative())
}

/// x I′_{−iλ}(x)/I_{−iλ}(x), with the x → 0 limit −iλ.
fn g_bessel_i(lambda: f64, x: f64) -> Result<C64> {
    if x == 0.0 {
        return Ok(C64::new(0.0, -lambda));
    }
    // order −iλ: the branch whose x → 0 limit is −iλ and whose current has
    // the sign of the mean rotation
    let i = bessel_i(C64::new(0.0, -lambda), x)?;
    Ok(x * i.log_derivative())
}

/// 1 − 2x W′_{l,m}(x)/W_{l,m}(x), with the x → 0 limit 2|m| (real m).
fn g_whittaker(l: C64, m: C64, x: C64) -> Result<C64> {
    if x.norm() == 0.0 {
        return Ok(C64::new(2.0 * m.re.abs(), 0.0));
    }
    let w = whittaker_w(l, m, x)?;
    Ok(1.0 - 2.0 * x * w.log_derivative())
}

/// k K′(k)/K(k) − k²/(1−k²).
fn g_elliptic_1(k: f64) -> Result<C64> {
    let m = k * k;
    let (kk, _) = elliptic_ke(m)?;
    let dk = 2.0 * k * kk.dm;
    Ok(C64::new(k * dk / kk.value - m / (1.0 - m), 0.0))
}

/// k̂(1−k̂²) K′(k̂)/K(k̂).
fn g_elliptic_2(k: f64) -> Result<C64> {
    let m = k * k;
    let (kk, _) = elliptic_ke(m)?;
    let dk = 2.0 * k * kk.dm;
    Ok(C64::new(k * (1.0 - m) * dk / kk.value, 0.0))
}

/// x ₂F₁′(1−a₃, a₁; a₁+a₂; x)/₂F₁(…).
fn g_hyp(a1: C64, a2: C64, a3: C64, x: f64) -> Result<C64> {
    let f = hyp2f1(1.0 - a3, a1, a1 + a2, x)?;
    Ok(x * f.log_derivative())
}

fn tiny(v: f64, scale: f64) -> bool {
    v.abs() <= 1e-12 * scale
}

/// Ω from the closed form of the model's family.
pub fn omega_closed(m: &DisorderModel) -> Result<ScalingEvaluation> {
    m.validate()?;
    let scale = m.cov_scale();
    let zero = C64::new(0.0, 0.0);
    if scale == 0.0 {
        let mu = mu_continuum(m.means);
        return ScalingEvaluation::new(Family::None, zero, Vec::new(), mu, zero);
    }
    let (daa, dww, duu) = (m.d_aa(), m.d_ww(), m.d_uu());
    let (daw, dau, dwu) = (m.d_aw(), m.d_au(), m.d_wu());
    if tiny(daa, scale) {
        if !tiny(daw, scale) || !tiny(dau, scale) {
            return Err(Error::UnsupportedFamily(
                "rotation covariances without rotation variance".into(),
            ));
        }
        if m.means.alpha < 0.0 {
            return omega_alpha_free(&m.reflected()).map(ScalingEvaluation::conj);
        }
        return omega_alpha_free(m);
    }
    let means_zero = m.means.as_array().iter().all(|&x| x == 0.0);
    if tiny(daw, scale)
        && tiny(dwu, scale)
        && tiny(duu - 2.0 * dau, scale)
        && tiny(duu - 4.0 * dww, scale)
    {
        return omega_distance(m);
    }
    if means_zero && tiny(daw, scale) && tiny(dau, scale) && tiny(dwu, scale) {
        return omega_elliptic(daa, dww, duu);
    }
    omega_hypergeometric(m)
}

/// Families with D_αα = 0 (and hence D_αw = D_αu = 0), for ᾱ ≥ 0.
fn omega_alpha_free(m: &DisorderModel) -> Result<ScalingEvaluation> {
    let scale = m.cov_scale();
    let (a, w, u) = (m.means.alpha, m.means.w, m.means.u);
    let (dww, duu, dwu) = (m.d_ww(), m.d_uu(), m.d_wu());
    let zero = C64::new(0.0, 0.0);
    if tiny(dww, scale) {
        // scalar disorder
        if a == 0.0 {
            return ScalingEvaluation::new(
                Family::None,
                zero,
                Vec::new(),
                C64::new(w.abs(), 0.0),
                zero,
            );
        }
        let beta = (a * a * duu / 2.0).cbrt();
        let x = mu_squared(m.means) / (beta * beta);
        return ScalingEvaluation::new(
            Family::Airy,
            C64::new(x, 0.0),
            Vec::new(),
            C64::new(beta, 0.0),
            zero,
        );
    }
    if tiny(duu, scale) {
        // supersymmetric disorder
        return bessel_real_index(w / dww, a * (u - a) / (dww * dww), dww);
    }
    let c = dwu / (dww * duu).sqrt();
    let y0 = 0.5 * (duu / dww).sqrt();
    if (1.0 - c.abs()) <= 1e-12 {
        let c = c.signum();
        let nu = (w + a * c * y0) / dww;
        let beta = u - a + 2.0 * (dww - w) * c * y0 - a * y0 * y0;
        return bessel_real_index(nu, a * beta / (dww * dww), dww);
    }
    // partly correlated: Whittaker
    let b = (1.0 - c * c).sqrt();
    let i = C64::new(0.0, 1.0);
    let x = i * (a * b * y0 / dww);
    let l = i * (c / (2.0 * b))
        + i * ((u - a - 2.0 * w * c * y0 + a * (1.0 - 2.0 * c * c) * y0 * y0)
            / (4.0 * dww * b * y0));
    let mm = C64::new(-(w + a * c * y0) / (2.0 * dww), 0.0);
    ScalingEvaluation::new(
        Family::Whittaker,
        x,
        vec![("l", l), ("m", mm)],
        C64::new(dww, 0.0),
        zero,
    )
}

/// Ω = D_ww G with the supersymmetric scaling function of index ν and
/// squared argument s2 (K_ν for s2 > 0, the Hankel form for s2 < 0).
pub fn bessel_real_index(nu: f64, s2: f64, dww: f64) -> Result<ScalingEvaluation> {
    let zero = C64::new(0.0, 0.0);
    let idx = vec![("nu", C64::new(nu, 0.0))];
    let pre = C64::new(dww, 0.0);
    if s2 >= 0.0 {
        ScalingEvaluation::new(Family::BesselK, C64::new(s2.sqrt(), 0.0), idx, pre, zero)
    } else {
        ScalingEvaluation::new(
            Family::BesselJn,
            C64::new((-s2).sqrt(), 0.0),
            idx,
            pre,
            zero,
        )
    }
}

/// Distance disorder, including Q = D_αα(y²+1)² with D_uu = 2D_αu = 4D_ww,
/// where D_ww enters as a shift of w̄ and of Ω.
fn omega_distance(m: &DisorderModel) -> Result<ScalingEvaluation> {
    let (a, u) = (m.means.alpha, m.means.u);
    let (daa, dww) = (m.d_aa(), m.d_ww());
    let w = m.means.w - dww;
    let lambda = (u - 2.0 * a) / (2.0 * daa);
    let x = (4.0 * w * w + u * u).sqrt() / (2.0 * daa);
    ScalingEvaluation::new(
        Family::BesselIImag,
        C64::new(x, 0.0),
        vec![("lambda", C64::new(lambda, 0.0))],
        C64::new(daa, 0.0),
        C64::new(dww, 0.0),
    )
}

/// Independent zero-mean disorder with D_αα > 0.
fn omega_elliptic(daa: f64, dww: f64, duu: f64) -> Result<ScalingEvaluation> {
    let delta = (daa * (daa + duu)).sqrt();
    let s = daa + 2.0 * dww;
    let pre = C64::new(delta, 0.0);
    let off = C64::new(dww, 0.0);
    if (delta - s).abs() <= 1e-14 * s {
        return ScalingEvaluation::new(Family::EllipticI, C64::new(0.0, 0.0), Vec::new(), pre, off);
    }
    if delta < s {
        let k = ((s - delta) / (s + delta)).sqrt();
        ScalingEvaluation::new(Family::EllipticI, C64::new(k, 0.0), Vec::new(), pre, off)
    } else {
        let k = ((delta - s) / (2.0 * delta)).sqrt();
        ScalingEvaluation::new(Family::EllipticII, C64::new(k, 0.0), Vec::new(), pre, off)
    }
}

/// Ω for the generic pattern of four simple zeros. The formula is used for
/// either sign of Re a₁; weak disorder always has one large negative exponent.
pub fn omega_hypergeometric(m: &DisorderModel) -> Result<ScalingEvaluation> {
    let c = build_coefficients(m);
    let z = classify_zeros(&c);
    match z.label {
        ZeroLabel::FourSimple => {}
        ZeroLabel::DegenerateOther => {
            return Err(Error::UnsupportedFamily(
                "degenerate-other zero pattern".into(),
            ))
        }
        other => {
            return Err(Error::UnsupportedFamily(format!(
                "zero pattern {} is outside the covered families",
                other.as_str()
            )))
        }
    }
    let y = z.ordered.expect("4s pattern is ordered");
    let a = exponents(&c, &z)?;
    let x = ((y[1] - y[0]) / (y[1].conj() - y[0])).norm_sqr();
    let daa = m.d_aa();
    let pre = 0.5 * daa * (y[0] - y[3]) * (y[2] - y[1]);
    let off = 0.5 * (c.r().eval_c(y[0]) / (y[0] - y[2]) - c.s().eval_c(y[0]));
    ScalingEvaluation::new(
        Family::Hypergeometric,
        C64::new(x, 0.0),
        vec![("a1", a[0]), ("a2", a[1]), ("a3", a[2]), ("a4", a[3])],
        pre,
        off,
    )
}

/// |lhs − rhs| of the family's Riccati equation at the evaluation point,
/// with G′ from a five-point centred difference.
pub fn riccati_residual(e: &ScalingEvaluation) -> Result<f64> {
    let x = e.x;
    // step along the ray of the argument
    let dir = if x.norm() > 0.0 {
        x / x.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let h = 1e-3 * x.norm().max(1e-2);
    let h = match e.family {
        Family::EllipticI | Family::EllipticII | Family::Hypergeometric => {
            h.min(0.5 * x.re).min(0.5 * (1.0 - x.re))
        }
        _ => h,
    };
    let hs = dir * h;
    let g = e.g;
    let f = |k: f64| e.g_at(x + hs * k);
    let dg = (8.0 * (f(1.0)? - f(-1.0)?) - (f(2.0)? - f(-2.0)?)) / (12.0 * hs);
    let (lhs, rhs) = match e.family {
        Family::None => {
            return Err(Error::NotApplicable(
                "no scaling function without disorder".into(),
            ))
        }
        Family::Airy => (g * g + dg, x),
        Family::BesselK => {
            let nu = e.index("nu");
            (g * g - x * dg, x * x + nu * nu)
        }
        Family::BesselJn => {
            let nu = e.index("nu");
            (g * g - x * dg, nu * nu - x * x)
        }
        Family::BesselIImag => {
            let l = e.index("lambda");
            (g * g + x * dg, x * x - l * l)
        }
        Family::Whittaker => {
            let (l, m) = (e.index("l"), e.index("m"));
            (g * g - 2.0 * x * dg, x * x - 4.0 * l * x + 4.0 * m * m)
        }
        Family::EllipticI => {
            let k2 = x * x;
            (g * g + x * dg, -k2 / ((1.0 - k2) * (1.0 - k2)))
        }
        Family::EllipticII => {
            let k2 = x * x;
            (g * g + x * (1.0 - k2) * dg, k2 * (1.0 - k2))
        }
        Family::Hypergeometric => {
            let (a1, a2, a3) = (e.index("a1"), e.index("a2"), e.index("a3"));
            let lhs =
                (1.0 - x) * g * g + x * (1.0 - x) * dg + ((a3 - a1 - 1.0) * x + a1 + a2 - 1.0) * g;
            (lhs, a1 * (1.0 - a3) * x)
        }
    };
    Ok((lhs - rhs).norm() / (1.0 + rhs.norm()))
}

/// Result of the constrained search for the largest Ω of independent
/// zero-mean disorder with 2D_αα + 2D_ww + D_uu = 1.
#[derive(Debug, Clone, Copy)]
pub struct EllipticMaximum {
    pub omega: f64,
    pub d_aa: f64,
    pub d_ww: f64,
    pub d_uu: f64,
    pub modulus: f64,
}

/// Maximises the elliptic-family Ω on the simplex 2D_αα + 2D_ww + D_uu = 1.
pub fn elliptic_maximum() -> Result<EllipticMaximum> {
    let omega = |p: [f64; 2]| -> f64 {
        let (daa, dww) = (p[0], p[1]);
        let duu = 1.0 - 2.0 * daa - 2.0 * dww;
        if daa <= 0.0 || dww < 0.0 || duu < 0.0 {
            return f64::NEG_INFINITY;
        }
        omega_elliptic(daa, dww, duu)
            .map(|e| e.omega.re)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let best = nelder_mead_max(omega, [0.05, 0.4], 0.02, 1e-15, 4000);
    let (daa, dww) = (best[0], best[1]);
    let duu = 1.0 - 2.0 * daa - 2.0 * dww;
    let e = omega_elliptic(daa, dww, duu)?;
    let modulus = match e.family {
        Family::EllipticI => e.x.re,
        _ => {
            let kh2 = e.x.re * e.x.re;
            // k² = −k̂²/(1−k̂²) is negative here; report |k|
            (kh2 / (1.0 - kh2)).sqrt()
        }
    };
    Ok(EllipticMaximum {
        omega: e.omega.re,
        d_aa: daa,
        d_ww: dww,
        d_uu: duu,
        modulus,
    })
}

fn nelder_mead_max<F: Fn([f64; 2]) -> f64>(
    f: F,
    x0: [f64; 2],
    step: f64,
    tol: f64,
    iters: usize,
) -> [f64; 2] {
    let mut s = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut v = s.map(&f);
    for _ in 0..iters {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap_or(std::cmp::Ordering::Equal));
        s = idx.map(|i| s[i]);
        v = idx.map(|i| v[i]);
        if (v[0] - v[2]).abs() <= tol * v[0].abs().max(1e-300) {
            break;
        }
        let c = [(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])];
        let r = at(-1.0);
        let fr = f(r);
        if fr > v[0] {
            let e = at(-2.0);
            let fe = f(e);
            if fe > fr {
                s[2] = e;
                v[2] = fe;
            } else {
                s[2] = r;
                v[2] = fr;
            }
        } else if fr > v[1] {
            s[2] = r;
            v[2] = fr;
        } else {
            let k = if fr > v[2] { at(-0.5) } else { at(0.5) };
            let fk = f(k);
            if fk > v[2].max(fr) {
                s[2] = k;
                v[2] = fk;
            } else {
                for i in 1..3 {
                    s[i] = [(s[0][0] + s[i][0]) / 2.0, (s[0][1] + s[i][1]) / 2.0];
                    v[i] = f(s[i]);
                }
            }
        }
    }
    s[0]
}

/// γ = (Γ(2/3)/(2Γ(1/3))) (3ᾱ²D_uu/2)^{1/3} at the band edge of scalar disorder.
pub fn airy_band_edge_gamma(alpha: f64, d_uu: f64) -> f64 {
    use crate::specfun::gamma;
    gamma(2.0 / 3.0) / (2.0 * gamma(1.0 / 3.0)) * (3.0 * alpha * alpha * d_uu / 2.0).cbrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::IwasawaParams;

    fn model(means: [f64; 3], cov: [[f64; 3]; 3]) -> DisorderModel {
        DisorderModel::new(IwasawaParams::new(means[0], means[1], means[2]), cov).unwrap()
    }

    #[test]
    fn equal_variance_elliptic() {
        let m = model(
            [0.0; 3],
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]],
        );
        let e = omega_closed(&m).unwrap();
        assert_eq!(e.family, Family::EllipticI);
        assert!((e.omega.re - 0.456_946).abs() < 1e-6 && e.omega.im == 0.0);
    }

    #[test]
    fn clean_rotation_and_stretch() {
        let e = omega_closed(&DisorderModel::no_disorder(IwasawaParams::new(
            0.3, 0.0, 0.0,
        )))
        .unwrap();
        assert!((e.omega - C64::new(0.0, 0.3)).norm() < 1e-15);
        let e = omega_closed(&DisorderModel::no_disorder(IwasawaParams::new(
            0.0, -0.2, 0.0,
        )))
        .unwrap();
        assert!((e.omega - C64::new(0.2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn airy_band_edge() {
        let (a, duu) = (0.7, 0.3);
        // μ² = ᾱū − ᾱ² = 0 at ū = ᾱ
        let m = model([a, 0.0, a], [[0.0; 3], [0.0; 3], [0.0, 0.0, duu]]);
        let e = omega_closed(&m).unwrap();
        let g = airy_band_edge_gamma(a, duu);
        assert!((e.omega.re - g).abs() < 1e-10 * g);
        assert!((e.omega.im - 3f64.sqrt() * g).abs() < 1e-10 * g);
    }

    #[test]
    fn borderline_elliptic_is_d_ww() {
        let (daa, dww) = (0.8, 0.3);
        let duu = 4.0 * dww * (daa + dww) / daa;
        let e = omega_elliptic(daa, dww, duu).unwrap();
        assert!((e.omega.re - dww).abs() < 1e-12);
        for eps in [1e-6, -1e-6] {
            let e = omega_elliptic(daa, dww, duu * (1.0 + eps)).unwrap();
            assert!((e.omega.re - dww).abs() < 1e-5);
        }
    }

    #[test]
    fn elliptic_regimes_agree_across_the_border() {
        let (daa, dww) = (1.0, 0.2);
        let duu0 = 4.0 * dww * (daa + dww) / daa;
        let below = omega_elliptic(daa, dww, duu0 - 1e-7).unwrap();
        let above = omega_elliptic(daa, dww, duu0 + 1e-7).unwrap();
        assert_eq!(below.family, Family::EllipticI);
        assert_eq!(above.family, Family::EllipticII);
        assert!((below.omega - above.omega).norm() < 1e-6);
    }

    #[test]
    fn riccati_residuals_for_every_family() {
        let cases = [
            model([0.5, 0.1, 0.9], [[0.0; 3], [0.0; 3], [0.0, 0.0, 0.4]]),
            model([0.5, 0.1, 0.9], [[0.0; 3], [0.0, 0.3, 0.0], [0.0; 3]]),
            model([0.9, 0.1, 0.2], [[0.0; 3], [0.0, 0.3, 0.0], [0.0; 3]]),
            model([0.5, 0.1, 0.3], [[0.4, 0.0, 0.0], [0.0; 3], [0.0; 3]]),
            model(
                [0.5, 0.1, 0.3],
                [[0.0; 3], [0.0, 0.3, 0.1], [0.0, 0.1, 0.5]],
            ),
            model(
                [0.0; 3],
                [[1.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.3]],
            ),
            model(
                [0.0; 3],
                [[1.0, 0.0, 0.0], [0.0, 0.1, 0.0], [0.0, 0.0, 3.0]],
            ),
            model(
                [0.4, 0.2, 0.1],
                [[0.5, 0.1, 0.0], [0.1, 0.3, 0.05], [0.0, 0.05, 0.4]],
            ),
        ];
        let expect = [
            Family::Airy,
            Family::BesselK,
            Family::BesselJn,
            Family::BesselIImag,
            Family::Whittaker,
            Family::EllipticI,
            Family::EllipticII,
            Family::Hypergeometric,
        ];
        for (m, f) in cases.iter().zip(expect) {
            let e = omega_closed(m).unwrap();
            assert_eq!(e.family, f);
            let r = riccati_residual(&e).unwrap();
            assert!(r < 1e-6, "{f:?}: residual {r}");
            assert!(e.omega.re > 0.0, "{f:?}: {}", e.omega);
        }
    }

    #[test]
    fn reflection_conjugates() {
        let m = model(
            [0.5, 0.1, 0.3],
            [[0.0; 3], [0.0, 0.3, 0.1], [0.0, 0.1, 0.5]],
        );
        let a = omega_closed(&m).unwrap().omega;
        let b = omega_closed(&m.reflected()).unwrap().omega;
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn homogeneity() {
        let m = model(
            [0.4, 0.2, 0.1],
            [[0.5, 0.1, 0.0], [0.1, 0.3, 0.05], [0.0, 0.05, 0.4]],
        );
        let o = omega_closed(&m).unwrap().omega;
        for s in [0.5, 2.0] {
            let os = omega_closed(&m.scaled(s)).unwrap().omega;
            assert!((os - s * o).norm() < 1e-9 * (s * o).norm());
        }
    }

    #[test]
    fn elliptic_maximum_location() {
        let r = elliptic_maximum().unwrap();
        assert!((r.omega - 0.170_787_995).abs() < 1e-8, "{r:?}");
        assert!((r.d_aa - 0.042_658).abs() < 1e-5 && (r.d_ww - 0.416_226).abs() < 1e-5);
        assert!((r.modulus - 0.919_798).abs() < 1e-5);
    }
}
