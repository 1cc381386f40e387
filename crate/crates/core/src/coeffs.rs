//! Drift and diffusion polynomials of the Riccati variable, the zeros of Q and
//! the exponents attached to them.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DisorderModel;
use crate::poly::Poly;

/// Q, R, S of the Hilbert-transform equation Q F′ + R F = S + 2Ω, with the
/// drift v and variance σ² = Q of the Riccati diffusion.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub q: Poly,
    pub r0: Poly,
    pub r2: Poly,
    pub s0: Poly,
    pub s2: Poly,
    pub v: Poly,
}

impl CoefficientSet {
    pub fn r(&self) -> Poly {
        &self.r0 + &self.r2
    }

    pub fn s(&self) -> Poly {
        &self.s0 + &self.s2
    }

    pub fn sigma2(&self) -> &Poly {
        &self.q
    }
}

pub fn build_coefficients(m: &DisorderModel) -> CoefficientSet {
    let (a, w, u) = (m.means.alpha, m.means.w, m.means.u);
    let (daa, dww, duu) = (m.d_aa(), m.d_ww(), m.d_uu());
    let (daw, dau, dwu) = (m.d_aw(), m.d_au(), m.d_wu());
    let v = Poly::new(&[
        -a + u + 2.0 * dwu,
        2.0 * w + daa + 2.0 * dww - 2.0 * dau,
        -a - 4.0 * daw,
        daa,
    ]);
    let q = Poly::new(&[
        daa + duu - 2.0 * dau,
        -4.0 * daw + 4.0 * dwu,
        2.0 * daa + 4.0 * dww - 2.0 * dau,
        -4.0 * daw,
        daa,
    ]);
    let r0 = Poly::new(&[2.0 * (a - u), -4.0 * w, 2.0 * a]);
    let r2 = Poly::new(&[-4.0 * daw, 2.0 * (daa + 2.0 * dww), -4.0 * daw, 2.0 * daa]);
    let s0 = Poly::new(&[-2.0 * w, 2.0 * a]);
    let s2 = Poly::new(&[daa, 0.0, daa]);
    CoefficientSet {
        q,
        r0,
        r2,
        s0,
        s2,
        v,
    }
}

/// A zero of Q on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroLoc {
    Finite(C64),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroLabel {
    #[serde(rename = "1q")]
    Quadruple,
    #[serde(rename = "2d")]
    TwoDouble,
    #[serde(rename = "1d+2s")]
    DoubleTwoSimple,
    #[serde(rename = "4s")]
    FourSimple,
    #[serde(rename = "degenerate-other")]
    DegenerateOther,
    #[serde(rename = "disorder-free")]
    DisorderFree,
}

impl ZeroLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZeroLabel::Quadruple => "1q",
            ZeroLabel::TwoDouble => "2d",
            ZeroLabel::DoubleTwoSimple => "1d+2s",
            ZeroLabel::FourSimple => "4s",
            ZeroLabel::DegenerateOther => "degenerate-other",
            ZeroLabel::DisorderFree => "disorder-free",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZeroPattern {
    /// Distinct zeros with their multiplicities.
    pub zeros: Vec<(ZeroLoc, usize)>,
    pub label: ZeroLabel,
    /// For the 4s pattern: y₁…y₄ ordered so that y₃ = y₂*, y₄ = y₁*.
    pub ordered: Option<[C64; 4]>,
}

impl ZeroPattern {
    pub fn multiplicity_at_infinity(&self) -> usize {
        self.zeros
            .iter()
            .filter(|(z, _)| *z == ZeroLoc::Infinity)
            .map(|(_, k)| *k)
            .sum()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|(_, k)| k).sum()
    }
}

fn coeff_tol(c: &CoefficientSet) -> f64 {
    let scale = c.q.0.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    1e-13 * scale
}

pub fn classify_zeros(c: &CoefficientSet) -> ZeroPattern {
    let tol = coeff_tol(c);
    let deg = match c.q.degree(tol) {
        None => {
            return ZeroPattern {
                zeros: Vec::new(),
                label: ZeroLabel::DisorderFree,
                ordered: None,
            }
        }
        Some(d) => d,
    };
    let mut zeros: Vec<(ZeroLoc, usize)> = Vec::new();
    for r in c.q.roots(deg) {
        let hit = zeros.iter_mut().find(|(z, _)| match z {
            ZeroLoc::Finite(y) => (*y - r).norm() <= 1e-6 * (1.0 + r.norm()),
            ZeroLoc::Infinity => false,
        });
        match hit {
            Some((ZeroLoc::Finite(y), k)) => {
                // running mean keeps the merged zero centred
                *y = (*y * (*k as f64) + r) / (*k as f64 + 1.0);
                *k += 1;
            }
            _ => zeros.push((ZeroLoc::Finite(r), 1)),
        }
    }
    if deg < 4 {
        zeros.push((ZeroLoc::Infinity, 4 - deg));
    }
    let mut mult: Vec<usize> = zeros.iter().map(|(_, k)| *k).collect();
    mult.sort_unstable();
    let label = match mult.as_slice() {
        [4] if deg == 0 => ZeroLabel::Quadruple,
        [2, 2] => ZeroLabel::TwoDouble,
        [1, 1, 2] => ZeroLabel::DoubleTwoSimple,
        [1, 1, 1, 1] => ZeroLabel::FourSimple,
        _ => ZeroLabel::DegenerateOther,
    };
    let ordered = if label == ZeroLabel::FourSimple {
        order_four_simple(&zeros)
    } else {
        None
    };
    let label = if label == ZeroLabel::FourSimple && ordered.is_none() {
        ZeroLabel::DegenerateOther
    } else {
        label
    };
    ZeroPattern {
        zeros,
        label,
        ordered,
    }
}

/// Labels four simple zeros as y₁, y₂ in the lower half-plane (sorted by
/// real part) and y₃ = y₂*, y₄ = y₁*. Fails when a zero is real.
fn order_four_simple(zeros: &[(ZeroLoc, usize)]) -> Option<[C64; 4]> {
    let mut lower: Vec<C64> = zeros
        .iter()
        .filter_map(|(z, _)| match z {
            ZeroLoc::Finite(y) if y.im < 0.0 => Some(*y),
            _ => None,
        })
        .collect();
    if lower.len() != 2 || lower.iter().any(|y| y.im.abs() < 1e-12 * (1.0 + y.norm())) {
        return None;
    }
    lower.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let (y1, y2) = (lower[0], lower[1]);
    Some([y1, y2, y2.conj(), y1.conj()])
}

/// aᵢ = R(yᵢ)/Q′(yᵢ) for the four simple zeros in the labelled order.
pub fn exponents(c: &CoefficientSet, z: &ZeroPattern) -> Result<[C64; 4]> {
    let ys = z
        .ordered
        .ok_or_else(|| Error::NotApplicable("exponents need four simple finite zeros".into()))?;
    let r = c.r();
    let dq = c.q.derivative();
    Ok(ys.map(|y| r.eval_c(y) / dq.eval_c(y)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCurrentVerdict {
    pub zero_current: bool,
    pub residual: f64,
}

/// Tests Im(a₁+a₂) = 0 for the 4s pattern. Degenerate patterns are decided
/// from the closed-form value of Ω instead.
pub fn zero_current_test(m: &DisorderModel, tol: f64) -> Result<ZeroCurrentVerdict> {
    let c = build_coefficients(m);
    let z = classify_zeros(&c);
    if z.label == ZeroLabel::FourSimple {
        let a = exponents(&c, &z)?;
        let residual = (a[0] + a[1]).im.abs();
        return Ok(ZeroCurrentVerdict {
            zero_current: residual < tol,
            residual,
        });
    }
    let e = crate::closed_form::omega_closed(m)?;
    let residual = e.omega.im.abs() / (1.0 + e.omega.norm());
    Ok(ZeroCurrentVerdict {
        zero_current: residual < tol,
        residual,
    })
}

/// A term s^ps c^pc with s = sin(φ/2), c = cos(φ/2).
#[derive(Debug, Clone, Copy)]
struct TrigMono {
    coef: f64,
    ps: i32,
    pc: i32,
}

#[derive(Debug, Clone)]
struct TrigPoly(Vec<TrigMono>);

impl TrigPoly {
    fn eval(&self, s: f64, c: f64) -> f64 {
        self.0
            .iter()
            .map(|t| t.coef * s.powi(t.ps) * c.powi(t.pc))
            .sum()
    }

    fn derivative(&self) -> TrigPoly {
        let mut out = Vec::new();
        for t in &self.0 {
            if t.ps > 0 {
                out.push(TrigMono {
                    coef: 0.5 * t.coef * t.ps as f64,
                    ps: t.ps - 1,
                    pc: t.pc + 1,
                });
            }
            if t.pc > 0 {
                out.push(TrigMono {
                    coef: -0.5 * t.coef * t.pc as f64,
                    ps: t.ps + 1,
                    pc: t.pc - 1,
                });
            }
        }
        TrigPoly(out)
    }
}

/// Angular drift v_a(φ) and variance σ_a²(φ) of φ = 2 arctan z, so that the
/// stationary density obeys (σ_a² f_a/2)′ − v_a f_a = j.
#[derive(Debug, Clone)]
pub struct AngularCoefficients {
    sig: [TrigPoly; 3],
    drift: [TrigPoly; 3],
}

impl AngularCoefficients {
    pub fn new(c: &CoefficientSet) -> Self {
        // σ_a² = 4 c⁴ Q(s/c); v_a = 2 c² v(s/c) − 2 s c³ Q(s/c); the 1/c
        // pieces cancel because the leading coefficients of v and Q agree.
        let q: Vec<f64> = (0..5).map(|k| c.q.coeff(k)).collect();
        let v: Vec<f64> = (0..4).map(|k| c.v.coeff(k)).collect();
        let sig: Vec<TrigMono> = (0..5)
            .map(|k| TrigMono {
                coef: 4.0 * q[k],
                ps: k as i32,
                pc: 4 - k as i32,
            })
            .collect();
        let mut drift: Vec<TrigMono> = (0..3)
            .map(|k| TrigMono {
                coef: 2.0 * v[k],
                ps: k as i32,
                pc: 2 - k as i32,
            })
            .collect();
        for (k, &qk) in q.iter().enumerate().take(4) {
            drift.push(TrigMono {
                coef: -2.0 * qk,
                ps: k as i32 + 1,
                pc: 3 - k as i32,
            });
        }
        // 2 v₃ s³/c − 2 q₄ s⁵/c with v₃ = q₄ = D_αα equals 2 D_αα s³ c
        drift.push(TrigMono {
            coef: 2.0 * v[3],
            ps: 3,
            pc: 1,
        });
        let sig = TrigPoly(sig);
        let drift = TrigPoly(drift);
        let sig1 = sig.derivative();
        let sig2 = sig1.derivative();
        let dr1 = drift.derivative();
        let dr2 = dr1.derivative();
        AngularCoefficients {
            sig: [sig, sig1, sig2],
            drift: [drift, dr1, dr2],
        }
    }

    /// σ_a² and its first two φ-derivatives.
    pub fn sigma2(&self, phi: f64) -> [f64; 3] {
        let (s, c) = (0.5 * phi).sin_cos();
        [
            self.sig[0].eval(s, c),
            self.sig[1].eval(s, c),
            self.sig[2].eval(s, c),
        ]
    }

    /// v_a and its first two φ-derivatives.
    pub fn drift(&self, phi: f64) -> [f64; 3] {
        let (s, c) = (0.5 * phi).sin_cos();
        [
            self.drift[0].eval(s, c),
            self.drift[1].eval(s, c),
            self.drift[2].eval(s, c),
        ]
    }
}
