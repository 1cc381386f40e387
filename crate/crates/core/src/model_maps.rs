//! Translations from other parameterisations into [`DisorderModel`].

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::DisorderModel;
use crate::sl2::IwasawaParams;

/// Second moments of the zero-mean entries of a perturbation
/// I + ε[[a, b], [c, d]] of the identity in GL(2, ℝ).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ZdCovariances {
    pub aa: f64,
    pub ab: f64,
    pub ac: f64,
    pub ad: f64,
    pub bb: f64,
    pub bc: f64,
    pub bd: f64,
    pub cc: f64,
    pub cd: f64,
    pub dd: f64,
}

impl ZdCovariances {
    /// ⟨b²⟩ = ⟨c²⟩ = σ².
    pub fn example1(sigma2: f64) -> Self {
        ZdCovariances {
            bb: sigma2,
            cc: sigma2,
            ..Default::default()
        }
    }

    /// ⟨a²⟩ = ⟨b²⟩ = ⟨c²⟩ = ⟨d²⟩ = σ².
    pub fn example2(sigma2: f64) -> Self {
        ZdCovariances {
            aa: sigma2,
            bb: sigma2,
            cc: sigma2,
            dd: sigma2,
            ..Default::default()
        }
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::new(
            self.aa, self.ab, self.ac, self.ad, //
            self.ab, self.bb, self.bc, self.bd, //
            self.ac, self.bc, self.cc, self.cd, //
            self.ad, self.bd, self.cd, self.dd,
        )
    }
}

/// Iwasawa model of the perturbed product and the offset turning its Ω into
/// the growth rate Γ of the unnormalised product: Γ = Ω − offset.
pub fn zd_to_model(z: &ZdCovariances) -> Result<(DisorderModel, f64)> {
    let m = z.matrix();
    if m.iter().any(|x| !x.is_finite()) {
        return domain("non-finite covariance");
    }
    let scale = m.abs().max().max(f64::MIN_POSITIVE);
    if SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .any(|&l| l < -1e-12 * scale)
    {
        return domain("covariance of (a, b, c, d) is not positive semi-definite");
    }
    let means = IwasawaParams::new(
        -z.ac,
        0.25 * (-z.aa + 2.0 * z.cc + z.dd + 2.0 * z.bc),
        -z.ab - 2.0 * z.ac + z.cd,
    );
    let daa = z.cc;
    let dww = 0.25 * (z.aa + z.dd - 2.0 * z.ad);
    let duu = z.bb + z.cc + 2.0 * z.bc;
    let daw = 0.5 * (z.ac - z.cd);
    let dau = z.bc + z.cc;
    let dwu = 0.5 * (z.ab + z.ac - z.bd - z.cd);
    let model = DisorderModel::new(means, [[daa, daw, dau], [daw, dww, dwu], [dau, dwu, duu]])?;
    Ok((model, 0.25 * (z.aa + z.dd + 2.0 * z.bc)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Random potential strengths only.
    Halperin,
    /// Random superpotential only.
    Susy,
    /// Random forward-scattering phases on a regular lattice.
    Distance,
    /// Correlated superpotential and potential.
    Mixed,
}

/// A regular lattice of double point scatterers in
/// H = −d²/dx² + W₁² − W₁′ + W₂ at energy k².
///
/// `noise` holds the white-noise intensities per unit length,
/// Cov(W_i(x), W_j(x′)) = noise[i][j] δ(x − x′).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumModel {
    pub k: f64,
    pub ell: f64,
    pub flavor: Flavor,
    /// E W₁(x) and E W₂(x).
    pub mean_w1: f64,
    pub mean_w2: f64,
    pub noise: [[f64; 2]; 2],
    /// Variance of the random phase per scatterer (distance flavor).
    #[serde(default)]
    pub distance_var: f64,
}

/// Parameters of the decoupled form φ² + φ′ + V + E₀ of the mixed
/// Hamiltonian (k = 1 units), with the energy shift D_wu between the two
/// orderings of the double impurity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixedParameters {
    pub nu: f64,
    pub g: f64,
    pub sigma2: f64,
    pub e0: f64,
    /// |ξ| of the Whittaker argument, √(σ²/g³)/2.
    pub xi_abs: f64,
    pub energy_shift: f64,
}

fn check_flavor(q: &QuantumModel) -> Result<()> {
    if !(q.k > 0.0 && q.ell > 0.0) {
        return domain("k and ℓ must be positive");
    }
    let [[nww, nwv], [nvw, nvv]] = q.noise;
    if nww < 0.0 || nvv < 0.0 || q.distance_var < 0.0 {
        return domain("negative variance");
    }
    if nwv != nvw || nwv * nwv > nww * nvv * (1.0 + 1e-12) {
        return domain("noise covariance is not symmetric positive semi-definite");
    }
    let ok = match q.flavor {
        Flavor::Halperin => nww == 0.0 && nwv == 0.0 && q.distance_var == 0.0 && nvv > 0.0,
        Flavor::Susy => nvv == 0.0 && nwv == 0.0 && q.distance_var == 0.0 && nww > 0.0,
        Flavor::Distance => nww == 0.0 && nvv == 0.0 && nwv == 0.0 && q.distance_var > 0.0,
        Flavor::Mixed => q.distance_var == 0.0 && nww > 0.0 && nvv > 0.0,
    };
    if !ok {
        return domain("statistics do not match the flavor");
    }
    Ok(())
}

/// ᾱ = kℓ, w̄ = ℓ E W₁, ū = ℓ E W₂/k; each scatterer contributes the
/// integrated noise over one lattice spacing.
pub fn quantum_to_model(q: &QuantumModel) -> Result<DisorderModel> {
    check_flavor(q)?;
    let (k, l) = (q.k, q.ell);
    let means = IwasawaParams::new(k * l, l * q.mean_w1, l * q.mean_w2 / k);
    let dww = l * q.noise[0][0];
    let dwu = l * q.noise[0][1] / k;
    let duu = l * q.noise[1][1] / (k * k);
    DisorderModel::new(
        means,
        [[q.distance_var, 0.0, 0.0], [0.0, dww, dwu], [0.0, dwu, duu]],
    )
}

/// Decoupled parameters of a mixed-flavor model (requires k = 1).
pub fn mixed_parameters(q: &QuantumModel) -> Result<MixedParameters> {
    if q.flavor != Flavor::Mixed || q.k != 1.0 {
        return domain("decoupled parameters are defined for the mixed flavor at k = 1");
    }
    let m = quantum_to_model(q)?;
    let (a, w, u) = (m.means.alpha, m.means.w, m.means.u);
    let (dww, duu, dwu) = (m.d_ww(), m.d_uu(), m.d_wu());
    let g = dww / a;
    let sigma2 = (duu * dww - dwu * dwu) / (a * dww);
    let nu = (-w / a - dwu / (2.0 * dww)) / g;
    let e0 = u / a - w * dwu / (a * dww) - (dwu / (2.0 * dww)).powi(2);
    Ok(MixedParameters {
        nu,
        g,
        sigma2,
        e0,
        xi_abs: 0.5 * (sigma2 / g.powi(3)).sqrt(),
        energy_shift: dwu,
    })
}

/// Brownian motion on the hyperbolic plane with drift: D_ww = 1/4,
/// D_uu = 1, w̄ = −ε/2.
pub fn hyperbolic_bm_model(eps: f64) -> Result<DisorderModel> {
    if !(eps > 0.0 && eps.is_finite()) {
        return domain("ε must be positive");
    }
    DisorderModel::diagonal(IwasawaParams::new(0.0, -0.5 * eps, 0.0), 0.0, 0.25, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{omega_closed, Family};
    use crate::specfun::airy_log_derivative;

    #[test]
    fn zanon_derrida_examples() {
        for s2 in [1e-3, 0.5, 2.0] {
            let (m, off) = zd_to_model(&ZdCovariances::example1(s2)).unwrap();
            assert_eq!(m.means.w, 0.5 * s2);
            assert_eq!((m.d_aa(), m.d_au(), m.d_uu()), (s2, s2, 2.0 * s2));
            let g = omega_closed(&m).unwrap().omega.re - off;
            assert!((g / s2 - 0.228473).abs() < 1e-5 * 0.228473, "{}", g / s2);
            let (m, off) = zd_to_model(&ZdCovariances::example2(s2)).unwrap();
            assert_eq!(m.d_ww(), 0.5 * s2);
            let g = omega_closed(&m).unwrap().omega.re - off;
            assert!(g.abs() < 1e-9 * s2.max(1.0), "{g}");
        }
        let (m, off) = zd_to_model(&ZdCovariances::default()).unwrap();
        assert_eq!(
            m,
            DisorderModel::no_disorder(IwasawaParams::new(0.0, 0.0, 0.0))
        );
        assert_eq!(off, 0.0);
    }

    #[test]
    fn zanon_derrida_rejects_indefinite_input() {
        let z = ZdCovariances {
            aa: 1.0,
            dd: 1.0,
            ad: 2.0,
            ..Default::default()
        };
        assert!(zd_to_model(&z).is_err());
    }

    fn quantum(flavor: Flavor, noise: [[f64; 2]; 2]) -> QuantumModel {
        QuantumModel {
            k: 1.3,
            ell: 0.05,
            flavor,
            mean_w1: 0.4,
            mean_w2: 1.1,
            noise,
            distance_var: 0.0,
        }
    }

    #[test]
    fn halperin_flavor_reproduces_white_noise_result() {
        let q = quantum(Flavor::Halperin, [[0.0, 0.0], [0.0, 0.7]]);
        let m = quantum_to_model(&q).unwrap();
        let om = omega_closed(&m).unwrap();
        assert_eq!(om.family, Family::Airy);
        let s = (q.noise[1][1] / 2.0).cbrt();
        let x = (q.mean_w1.powi(2) + q.mean_w2 - q.k * q.k) / (s * s);
        let expect = s * airy_log_derivative(x);
        assert!((om.omega / q.ell - expect).norm() < 1e-9 * expect.norm());
    }

    #[test]
    fn susy_flavor_uses_bessel_family() {
        let mut q = quantum(Flavor::Susy, [[0.3, 0.0], [0.0, 0.0]]);
        q.k = 0.8;
        let m = quantum_to_model(&q).unwrap();
        let om = omega_closed(&m).unwrap();
        assert_eq!(om.family, Family::BesselK);
        let g = q.noise[0][0];
        assert!((om.index("nu").re - q.mean_w1 / g).abs() < 1e-12);
        // the scaling argument is √(E W₂ − k²)/g up to the lattice discreteness
        assert!((om.x.re - (q.mean_w2 - q.k * q.k).sqrt() / g).abs() < 0.05 * om.x.re);
    }

    #[test]
    fn fully_correlated_mixed_matches_susy_family() {
        let (nww, nvv) = (0.3_f64, 0.5_f64);
        for sign in [1.0, -1.0] {
            let q = quantum(
                Flavor::Mixed,
                [
                    [nww, sign * (nww * nvv).sqrt()],
                    [sign * (nww * nvv).sqrt(), nvv],
                ],
            );
            let om = omega_closed(&quantum_to_model(&q).unwrap()).unwrap();
            assert!(matches!(om.family, Family::BesselK | Family::BesselJn));
        }
    }

    #[test]
    fn mixed_parameters_match_whittaker_argument() {
        let q = QuantumModel {
            k: 1.0,
            ell: 0.2,
            flavor: Flavor::Mixed,
            mean_w1: 0.3,
            mean_w2: 0.6,
            noise: [[0.4, 0.1], [0.1, 0.9]],
            distance_var: 0.0,
        };
        let m = quantum_to_model(&q).unwrap();
        let om = omega_closed(&m).unwrap();
        assert_eq!(om.family, Family::Whittaker);
        let p = mixed_parameters(&q).unwrap();
        assert!((p.xi_abs - om.x.norm()).abs() < 1e-12 * p.xi_abs);
        assert_eq!(p.energy_shift, m.d_wu());
        // the Whittaker index m is ν/2
        assert!((p.nu - 2.0 * om.index("m").re).abs() < 1e-12 * p.nu.abs());
    }

    #[test]
    fn flavor_consistency_is_enforced() {
        assert!(quantum_to_model(&quantum(Flavor::Halperin, [[0.1, 0.0], [0.0, 0.7]])).is_err());
        assert!(quantum_to_model(&quantum(Flavor::Mixed, [[0.1, 0.5], [0.5, 0.7]])).is_err());
        let mut q = quantum(Flavor::Distance, [[0.0; 2]; 2]);
        q.distance_var = 0.2;
        let m = quantum_to_model(&q).unwrap();
        assert_eq!(m.d_aa(), 0.2);
    }

    #[test]
    fn hyperbolic_preset() {
        let m = hyperbolic_bm_model(0.5).unwrap();
        assert_eq!((m.d_ww(), m.d_uu(), m.means.w), (0.25, 1.0, -0.25));
        let om = omega_closed(&m).unwrap().omega;
        assert!((om.re - 0.25).abs() < 1e-12 && om.im.abs() < 1e-12);
        assert!(hyperbolic_bm_model(0.0).is_err());
    }
}
