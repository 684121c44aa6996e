//! Flat key=value configuration blocks.
//!
//! Grammar: whitespace/newline-separated `key=value` tokens; `#` starts a
//! comment that runs to end of line. Keys are snake_case. A family block
//! uses `family=<name>` plus the family's parameters:
//!
//!   family=constant c=1.0
//!   family=atom q0=0.3 base_s=0.5
//!   family=bounded_weibull alpha=3.0
//!   family=bounded_gumbel_rv tau=1.0 c1=1.0
//!   family=gumbel_sv tau=1.0 c1=1.0 a=1.0 b=0.0
//!   family=gumbel_rv tau=1.0 c1=1.0 a=1.0 b=0.0
//!   family=gumbel_rav tau=2.0 c1=1.0 a=1.0 b=0.0
//!   family=frechet_pareto alpha=3.0 x_min=0.5
//!
//! plus `normalize_mean=true|false` (default false). Run keys (n, m, seed,
//! replicas, variant, window_s, window_t, window_gamma, window_zeta0, kmax,
//! mode, ladder, g_min, random_out_cap, out, suite) share the same
//! namespace; later duplicates override earlier ones, which is how flag
//! overrides are implemented.

use crate::error::{Error, Result};
use crate::weights::{WeightClass, WeightFamily};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<ConfigMap> {
        let mut entries = BTreeMap::new();
        for raw_line in text.lines() {
            let line = raw_line.split('#').next().unwrap_or("");
            for token in line.split_whitespace() {
                let (k, v) = token
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got `{token}`")))?;
                if k.is_empty() || v.is_empty() {
                    return Err(Error::Parse(format!("empty key or value in `{token}`")));
                }
                entries.insert(k.to_string(), v.to_string());
            }
        }
        Ok(ConfigMap { entries })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("key {key}: bad float `{v}`: {e}")))
            })
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?
            .ok_or_else(|| Error::Parse(format!("missing required key `{key}`")))
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("key {key}: bad integer `{v}`: {e}")))
            })
            .transpose()
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        self.entries
            .get(key)
            .map(|v| match v.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(Error::Parse(format!("key {key}: bad bool `{other}`"))),
            })
            .transpose()
    }

    /// Canonical dump: one key=value per line, sorted by key.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Build the weight family described by this block.
    pub fn family(&self) -> Result<WeightFamily> {
        let name = self
            .get("family")
            .ok_or_else(|| Error::Parse("missing `family` key".into()))?;
        let class = match name {
            "constant" => WeightClass::Constant { c: self.require_f64("c")? },
            "atom" => WeightClass::Atom {
                q0: self.require_f64("q0")?,
                s: self.get_f64("base_s")?.unwrap_or(0.5),
            },
            "bounded_weibull" => WeightClass::BoundedWeibull { alpha: self.require_f64("alpha")? },
            "bounded_gumbel_rv" => WeightClass::BoundedGumbelRv {
                tau: self.require_f64("tau")?,
                c1: self.require_f64("c1")?,
            },
            "gumbel_sv" | "gumbel_rv" | "gumbel_rav" => {
                let tau = self.require_f64("tau")?;
                let c1 = self.require_f64("c1")?;
                let a = self.get_f64("a")?.unwrap_or(1.0);
                let b = self.get_f64("b")?.unwrap_or(0.0);
                match name {
                    "gumbel_sv" => WeightClass::GumbelSv { tau, c1, a, b },
                    "gumbel_rv" => WeightClass::GumbelRv { tau, c1, a, b },
                    _ => WeightClass::GumbelRav { tau, c1, a, b },
                }
            }
            "frechet_pareto" => WeightClass::FrechetPareto {
                alpha: self.require_f64("alpha")?,
                x_min: self.require_f64("x_min")?,
            },
            other => {
                return Err(Error::Parse(format!(
                    "unknown family `{other}` (bounded_inverse families are API-only)"
                )))
            }
        };
        let normalize = self.get_bool("normalize_mean")?.unwrap_or(false);
        WeightFamily::new(class, normalize)
    }

    /// Write the family parameters back into a config block.
    pub fn set_family(&mut self, family: &WeightFamily) -> Result<()> {
        use WeightClass::*;
        match family.class() {
            Constant { c } => {
                self.set("family", "constant");
                self.set("c", c);
            }
            Atom { q0, s } => {
                self.set("family", "atom");
                self.set("q0", q0);
                self.set("base_s", s);
            }
            BoundedWeibull { alpha } => {
                self.set("family", "bounded_weibull");
                self.set("alpha", alpha);
            }
            BoundedGumbelRv { tau, c1 } => {
                self.set("family", "bounded_gumbel_rv");
                self.set("tau", tau);
                self.set("c1", c1);
            }
            GumbelSv { tau, c1, a, b } | GumbelRv { tau, c1, a, b } | GumbelRav { tau, c1, a, b } => {
                let name = match family.class() {
                    GumbelSv { .. } => "gumbel_sv",
                    GumbelRv { .. } => "gumbel_rv",
                    _ => "gumbel_rav",
                };
                self.set("family", name);
                self.set("tau", tau);
                self.set("c1", c1);
                self.set("a", a);
                self.set("b", b);
            }
            FrechetPareto { alpha, x_min } => {
                self.set("family", "frechet_pareto");
                self.set("alpha", alpha);
                self.set("x_min", x_min);
            }
            BoundedInverse { .. } => {
                return Err(Error::Domain(
                    "bounded_inverse families have no key=value form; use the JSON serializer"
                        .into(),
                ))
            }
        }
        self.set("normalize_mean", family.normalize_mean());
        Ok(())
    }
}
