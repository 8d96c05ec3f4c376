//! JSON run configuration and the figure presets.

use std::path::{Path, PathBuf};

use blowup_core::blowup_ode::IntegrationSettings;
use blowup_core::regions::SystemParams;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Preset {
    #[serde(rename = "fig-a")]
    #[value(name = "fig-a")]
    FigA,
    #[serde(rename = "fig-b")]
    #[value(name = "fig-b")]
    FigB,
    #[serde(rename = "fig-c")]
    #[value(name = "fig-c")]
    FigC,
    #[serde(rename = "fig-d")]
    #[value(name = "fig-d")]
    FigD,
    #[serde(rename = "fig-e")]
    #[value(name = "fig-e")]
    FigE,
    #[serde(rename = "fig-f")]
    #[value(name = "fig-f")]
    FigF,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::FigA,
        Preset::FigB,
        Preset::FigC,
        Preset::FigD,
        Preset::FigE,
        Preset::FigF,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::FigA => "fig-a",
            Preset::FigB => "fig-b",
            Preset::FigC => "fig-c",
            Preset::FigD => "fig-d",
            Preset::FigE => "fig-e",
            Preset::FigF => "fig-f",
        }
    }

    /// Preset parameters, with `ν_i² = 0` and `R = 1`.
    pub fn params(&self) -> SystemParams<f64> {
        let base = SystemParams {
            n: 1,
            m: 1.0,
            mu1: 4.0,
            mu2: 2.0,
            nu1_sq: 0.0,
            nu2_sq: 0.0,
            p: 2.0,
            q: 1.5,
            eps: 0.1,
            radius: 1.0,
        };
        match self {
            Preset::FigA => base,
            Preset::FigB => SystemParams { eps: 0.01, ..base },
            Preset::FigC => SystemParams { mu1: 0.0, ..base },
            Preset::FigD => SystemParams {
                mu1: 0.0,
                eps: 0.01,
                ..base
            },
            Preset::FigE => SystemParams {
                n: 2,
                mu1: 3.0,
                mu2: 5.0,
                q: 1.25,
                ..base
            },
            Preset::FigF => SystemParams {
                n: 2,
                mu1: 3.0,
                mu2: 5.0,
                q: 1.25,
                eps: 0.01,
                ..base
            },
        }
    }

    /// Integration horizon. The `Ω = 0` presets do not blow up and stop at
    /// a fixed final time `96/ε`.
    pub fn horizon(&self) -> f64 {
        match self {
            Preset::FigE | Preset::FigF => 96.0 / self.params().eps,
            _ => 1e5,
        }
    }
}

/// Partial parameter set; fields left out fall back to the preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu1_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu2_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub p_max: f64,
    pub q_max: f64,
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            p_max: 4.0,
            q_max: 4.0,
            resolution: 60,
        }
    }
}

impl GridSpec {
    /// `1 + (max - 1)(i + 1)/resolution` for `i < resolution`.
    pub fn axis(max: f64, resolution: usize) -> Vec<f64> {
        (0..resolution)
            .map(|i| 1.0 + (max - 1.0) * (i + 1) as f64 / resolution as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub params: ParamOverrides,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifespan_constant: Option<f64>,
    /// Verification self-test: perturbs `ρ` by 1% in the residual check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject_fault: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Parameters after applying overrides to the preset.
    pub fn params(&self) -> Result<SystemParams<f64>, CliError> {
        let o = &self.params;
        let base = self.preset.map(|p| p.params());
        let mut missing = Vec::new();
        let mut pick = |name: &'static str, v: Option<f64>, from: Option<f64>| {
            v.or(from).unwrap_or_else(|| {
                missing.push(name);
                f64::NAN
            })
        };
        let params = SystemParams {
            n: 0,
            m: pick("m", o.m, base.map(|b| b.m)),
            mu1: pick("mu1", o.mu1, base.map(|b| b.mu1)),
            mu2: pick("mu2", o.mu2, base.map(|b| b.mu2)),
            nu1_sq: o.nu1_sq.or(base.map(|b| b.nu1_sq)).unwrap_or(0.0),
            nu2_sq: o.nu2_sq.or(base.map(|b| b.nu2_sq)).unwrap_or(0.0),
            p: pick("p", o.p, base.map(|b| b.p)),
            q: pick("q", o.q, base.map(|b| b.q)),
            eps: pick("eps", o.eps, base.map(|b| b.eps)),
            radius: o.radius.or(base.map(|b| b.radius)).unwrap_or(1.0),
        };
        let n = o.n.or(base.map(|b| b.n));
        if n.is_none() {
            missing.insert(0, "n");
        }
        if !missing.is_empty() {
            return Err(CliError::Config(format!(
                "missing parameters (no preset given): {}",
                missing.join(", ")
            )));
        }
        Ok(SystemParams {
            n: n.unwrap_or(0),
            ..params
        })
    }

    pub fn settings(&self) -> Result<IntegrationSettings<f64>, CliError> {
        let mut s = IntegrationSettings::default();
        if let Some(h) = self.horizon.or(self.preset.map(|p| p.horizon())) {
            s.horizon = h;
        }
        if let Some(t) = &self.thresholds {
            s.thresholds = t.clone();
        }
        s.rtol = self.rtol.unwrap_or(s.rtol);
        s.atol = self.atol.unwrap_or(s.atol);
        Ok(s)
    }

    /// The ε values of a sweep: the configured list, or `{0.1, 0.01}`
    /// for presets. Entries must be positive and distinct.
    pub fn eps_list(&self) -> Result<Vec<f64>, CliError> {
        let list = match (&self.eps_list, self.preset) {
            (Some(l), _) => l.clone(),
            (None, Some(_)) => vec![0.1, 0.01],
            (None, None) => return Err(CliError::Config("sweep needs eps_list".into())),
        };
        if list.len() < 2 {
            return Err(CliError::Config(format!(
                "sweep needs at least 2 eps values, got {}",
                list.len()
            )));
        }
        if let Some(e) = list.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
            return Err(CliError::Hypothesis(format!(
                "hypothesis violated: eps > 0 (eps = {e})"
            )));
        }
        let mut sorted = list.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Runtime(
                "scaling fit rejected: degenerate abscissa (eps values repeat)".into(),
            ));
        }
        Ok(list)
    }

    pub fn grid(&self) -> Result<GridSpec, CliError> {
        let g = self.grid.unwrap_or_default();
        if !(g.p_max > 1.0 && g.q_max > 1.0) || !g.p_max.is_finite() || !g.q_max.is_finite() {
            return Err(CliError::Config(format!(
                "grid bounds must exceed 1, got p_max = {}, q_max = {}",
                g.p_max, g.q_max
            )));
        }
        if g.resolution < 2 {
            return Err(CliError::Config(format!(
                "grid resolution must be at least 2, got {}",
                g.resolution
            )));
        }
        Ok(g)
    }

    pub fn lifespan_constant(&self) -> f64 {
        self.lifespan_constant.unwrap_or(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            let json = serde_json::to_string(&p).unwrap();
            assert_eq!(json, format!("\"{}\"", p.name()));
            assert_eq!(serde_json::from_str::<Preset>(&json).unwrap(), p);
        }
    }

    #[test]
    fn overrides_and_missing_fields() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"preset": "fig-a", "params": {"eps": 0.5}}"#).unwrap();
        let p = cfg.params().unwrap();
        assert_eq!((p.eps, p.p, p.mu1), (0.5, 2.0, 4.0));
        let cfg: RunConfig = serde_json::from_str(r#"{"params": {"p": 2.0}}"#).unwrap();
        let err = cfg.params().unwrap_err().to_string();
        assert!(err.contains("n, m, mu1, mu2, q, eps"), "{err}");
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn eps_list_rules() {
        let cfg = |s: &str| serde_json::from_str::<RunConfig>(s).unwrap();
        assert_eq!(
            cfg(r#"{"preset": "fig-c"}"#).eps_list().unwrap(),
            vec![0.1, 0.01]
        );
        let dup = cfg(r#"{"eps_list": [0.1, 0.1]}"#).eps_list().unwrap_err();
        assert!(dup.to_string().contains("degenerate abscissa"));
        assert_eq!(
            cfg(r#"{"eps_list": [0.1, -1]}"#)
                .eps_list()
                .unwrap_err()
                .exit_code(),
            2
        );
        assert!(cfg(r#"{"eps_list": [0.1]}"#).eps_list().is_err());
    }

    #[test]
    fn grid_axis() {
        assert_eq!(GridSpec::axis(3.0, 4), vec![1.5, 2.0, 2.5, 3.0]);
        let cfg: RunConfig =
            serde_json::from_str(r#"{"grid": {"p_max": 1.0, "q_max": 2, "resolution": 4}}"#)
                .unwrap();
        assert!(cfg.grid().is_err());
    }
}
