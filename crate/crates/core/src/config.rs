//! JSON model configuration and the `PARAM=START:STOP:N` sweep syntax.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DisorderModel;
use crate::model_maps::{
    hyperbolic_bm_model, quantum_to_model, zd_to_model, Flavor, QuantumModel, ZdCovariances,
};
use crate::sl2::IwasawaParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Means {
    pub alpha: f64,
    pub w: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Parameter `eps` (default 0.5).
    HyperbolicBm,
    /// Parameter `sigma2` (default 1).
    ZdExample1,
    ZdExample2,
}

/// A model given by its nine parameters, by a preset, or by a quantum
/// point-scatterer description.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub means: Option<Means>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov: Option<[[f64; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumModel>,
}

/// The model together with the constants needed to interpret its Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedModel {
    pub model: DisorderModel,
    /// Γ = Ω − gamma_offset for the perturbed-identity presets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_offset: Option<f64>,
    /// D_wu energy shift of the mixed quantum flavor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_shift: Option<f64>,
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid model config: {e}")))
    }

    pub fn explicit(m: &DisorderModel) -> Self {
        ModelConfig {
            means: Some(Means {
                alpha: m.means.alpha,
                w: m.means.w,
                u: m.means.u,
            }),
            cov: Some(m.cov),
            ..Default::default()
        }
    }

    pub fn resolve(&self) -> Result<ResolvedModel> {
        let sources = [
            self.means.is_some() || self.cov.is_some(),
            self.preset.is_some(),
            self.quantum.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(Error::Config(
                "give exactly one of means/cov, preset or quantum".into(),
            ));
        }
        if self.eps.is_some() && self.preset != Some(Preset::HyperbolicBm) {
            return Err(Error::Config(
                "`eps` only applies to the hyperbolic_bm preset".into(),
            ));
        }
        if self.sigma2.is_some()
            && !matches!(self.preset, Some(Preset::ZdExample1 | Preset::ZdExample2))
        {
            return Err(Error::Config(
                "`sigma2` only applies to the zd presets".into(),
            ));
        }
        let plain = |model| ResolvedModel {
            model,
            gamma_offset: None,
            energy_shift: None,
        };
        let out = match (self.preset, &self.quantum) {
            (Some(Preset::HyperbolicBm), _) => plain(hyperbolic_bm_model(self.eps.unwrap_or(0.5))?),
            (Some(p), _) => {
                let s2 = self.sigma2.unwrap_or(1.0);
                let z = if p == Preset::ZdExample1 {
                    ZdCovariances::example1(s2)
                } else {
                    ZdCovariances::example2(s2)
                };
                let (model, off) = zd_to_model(&z)?;
                ResolvedModel {
                    model,
                    gamma_offset: Some(off),
                    energy_shift: None,
                }
            }
            (None, Some(q)) => {
                let model = quantum_to_model(q)?;
                let shift = (q.flavor == Flavor::Mixed).then(|| model.d_wu());
                ResolvedModel {
                    model,
                    gamma_offset: None,
                    energy_shift: shift,
                }
            }
            (None, None) => {
                let m = self
                    .means
                    .ok_or_else(|| Error::Config("`means` is required with `cov`".into()))?;
                let cov = self
                    .cov
                    .ok_or_else(|| Error::Config("`cov` is required with `means`".into()))?;
                plain(DisorderModel::new(
                    IwasawaParams::new(m.alpha, m.w, m.u),
                    cov,
                )?)
            }
        };
        Ok(out)
    }

    /// Sets the parameter named by a sweep axis.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        if let Some((i, j)) = cov_index(name) {
            let cov = self
                .cov
                .as_mut()
                .ok_or_else(|| Error::Config(format!("`{name}` needs an explicit cov")))?;
            cov[i][j] = value;
            cov[j][i] = value;
            return Ok(());
        }
        match name {
            "alpha" | "w" | "u" => {
                let m = self
                    .means
                    .as_mut()
                    .ok_or_else(|| Error::Config(format!("`{name}` needs explicit means")))?;
                *match name {
                    "alpha" => &mut m.alpha,
                    "w" => &mut m.w,
                    _ => &mut m.u,
                } = value;
            }
            "scale" => {
                let cov = self
                    .cov
                    .as_mut()
                    .ok_or_else(|| Error::Config("`scale` needs an explicit cov".into()))?;
                cov.iter_mut().flatten().for_each(|x| *x *= value);
            }
            "eps" => self.eps = Some(value),
            "sigma2" => self.sigma2 = Some(value),
            "k" | "ell" => {
                let q = self
                    .quantum
                    .as_mut()
                    .ok_or_else(|| Error::Config(format!("`{name}` needs a quantum model")))?;
                *if name == "k" { &mut q.k } else { &mut q.ell } = value;
            }
            _ => return Err(Error::Config(format!("unknown sweep parameter `{name}`"))),
        }
        Ok(())
    }
}

fn cov_index(name: &str) -> Option<(usize, usize)> {
    Some(match name {
        "d_aa" => (0, 0),
        "d_ww" => (1, 1),
        "d_uu" => (2, 2),
        "d_aw" => (0, 1),
        "d_au" => (0, 2),
        "d_wu" => (1, 2),
        _ => return None,
    })
}

/// Parameter names accepted on a sweep axis.
pub const SWEEP_PARAMS: [&str; 14] = [
    "alpha", "w", "u", "d_aa", "d_ww", "d_uu", "d_aw", "d_au", "d_wu", "scale", "eps", "sigma2",
    "k", "ell",
];

/// `PARAM=START:STOP:N`, N ≥ 2 equally spaced values including both ends.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl SweepSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("invalid sweep `{s}`: {why}"));
        let (param, range) = s
            .split_once('=')
            .ok_or_else(|| bad("expected PARAM=START:STOP:N"))?;
        let param = param.trim();
        if !SWEEP_PARAMS.contains(&param) {
            return Err(bad("unknown parameter"));
        }
        let parts: Vec<&str> = range.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad("expected START:STOP:N"));
        };
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad("bounds must be finite numbers"))
        };
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| bad("N must be a non-negative integer"))?;
        if n < 2 {
            return Err(bad("N must be at least 2"));
        }
        Ok(SweepSpec {
            param: param.to_string(),
            start: num(a)?,
            stop: num(b)?,
            n,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_config_round_trips() {
        let text = r#"{"means": {"alpha": 0.4, "w": -0.3, "u": 0.7},
                       "cov": [[1.0, 0.2, -0.1], [0.2, 0.8, 0.3], [-0.1, 0.3, 1.5]]}"#;
        let c = ModelConfig::from_json(text).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.model.d_wu(), 0.3);
        let again = ModelConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
        assert_eq!(ModelConfig::explicit(&r.model), c);
    }

    #[test]
    fn presets_resolve() {
        let c = ModelConfig::from_json(r#"{"preset": "hyperbolic_bm", "eps": 1.5}"#).unwrap();
        assert_eq!(c.resolve().unwrap().model.means.w, -0.75);
        let c = ModelConfig::from_json(r#"{"preset": "zd_example1"}"#).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.gamma_offset, Some(0.0));
        assert_eq!(r.model.d_uu(), 2.0);
    }

    #[test]
    fn bad_configs_are_rejected() {
        for text in [
            "{}",
            r#"{"means": {"alpha": 0, "w": 0, "u": 0}}"#,
            r#"{"preset": "nope"}"#,
            r#"{"preset": "zd_example2", "eps": 1}"#,
            r#"{"means": {"alpha": 0, "w": 0, "u": 0}, "cov": [[1,0,0],[0,1,0],[0,0,1]], "extra": 1}"#,
            r#"{"means": {"alpha": 0, "w": 0, "u": 0}, "cov": [[1,2,0],[2,1,0],[0,0,1]]}"#,
        ] {
            let r = ModelConfig::from_json(text).and_then(|c| c.resolve());
            assert!(r.is_err(), "{text}");
        }
    }

    #[test]
    fn sweep_parsing() {
        let s = SweepSpec::parse("d_ww=0:1:5").unwrap();
        assert_eq!(s.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        for bad in [
            "d_ww=0:1:1",
            "x=0:1:3",
            "d_ww=0:1",
            "d_ww=a:1:3",
            "d_ww0:1:3",
            "d_ww=0:inf:3",
            "d_ww=0:1:3:4",
        ] {
            assert!(SweepSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_axis_updates_model() {
        let mut c = ModelConfig::from_json(
            r#"{"means": {"alpha": 0.4, "w": -0.3, "u": 0.7}, "cov": [[1,0,0],[0,1,0],[0,0,1]]}"#,
        )
        .unwrap();
        c.set_param("d_wu", 0.2).unwrap();
        c.set_param("alpha", 1.0).unwrap();
        let m = c.resolve().unwrap().model;
        assert_eq!((m.cov[2][1], m.means.alpha), (0.2, 1.0));
        assert!(c.set_param("eps", 1.0).is_ok());
        assert!(c.resolve().is_err());
        assert!(c.set_param("k", 1.0).is_err());
    }
}
