//! A small key-value configuration dialect: one `key = value` pair per line,
//! dotted keys forming a tree, `#` comments. Unknown keys are rejected with
//! their location once an operation has claimed everything it understands,
//! and a parsed configuration serializes back to canonical (sorted) text so
//! runs are reproducible byte for byte.
//!
//! ```text
//! # keller-osserman check on the p-Laplacian family
//! op = ko
//! ko.endpoint = infinity
//! triple.phi.family = plaplace
//! triple.phi.p = 2
//! ```

use std::cell::Cell;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::ConfigError;
use crate::model::{CurvatureProfile, ModelManifold};
use crate::nonlinearity::{GradientTerm, Nonlinearity, PhiFunction, Triple, WeightProfile};

#[derive(Debug)]
struct Entry {
    raw: String,
    line: usize,
    claimed: Cell<bool>,
}

/// A parsed configuration file.
#[derive(Debug)]
pub struct Config {
    path: String,
    entries: BTreeMap<String, Entry>,
}

impl Config {
    pub fn from_file(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::parse(path, &text)
    }

    pub fn parse(path: &str, text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = lineno + 1;
            let stripped = match raw_line.find('#') {
                Some(i) => &raw_line[..i],
                None => raw_line,
            };
            if stripped.trim().is_empty() {
                continue;
            }
            let eq = stripped.find('=').ok_or_else(|| ConfigError::Parse {
                path: path.to_string(),
                line,
                col: stripped.len(),
                message: "expected `key = value`".into(),
            })?;
            let key = stripped[..eq].trim();
            let value = stripped[eq + 1..].trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '_' || c == '-')
            {
                return Err(ConfigError::Parse {
                    path: path.to_string(),
                    line,
                    col: 1,
                    message: format!("bad key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::Parse {
                    path: path.to_string(),
                    line,
                    col: eq + 2,
                    message: "missing value".into(),
                });
            }
            if entries
                .insert(
                    key.to_string(),
                    Entry {
                        raw: value.to_string(),
                        line,
                        claimed: Cell::new(false),
                    },
                )
                .is_some()
            {
                return Err(ConfigError::Parse {
                    path: path.to_string(),
                    line,
                    col: 1,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self {
            path: path.to_string(),
            entries,
        })
    }

    /// Canonical (sorted) serialization; `parse(to_text(..))` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, e) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&e.raw);
            out.push('\n');
        }
        out
    }

    fn lookup(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key).inspect(|e| e.claimed.set(true))
    }

    pub fn get_str(&self, key: &str) -> Result<&str, ConfigError> {
        self.lookup(key)
            .map(|e| e.raw.as_str())
            .ok_or_else(|| ConfigError::MissingKey {
                path: self.path.clone(),
                key: key.to_string(),
            })
    }

    pub fn opt_str(&self, key: &str) -> Option<&str> {
        self.lookup(key).map(|e| e.raw.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<f64, ConfigError> {
        let raw = self.get_str(key)?;
        raw.parse().map_err(|_| ConfigError::BadValue {
            path: self.path.clone(),
            key: key.to_string(),
            message: format!("`{raw}` is not a number"),
        })
    }

    pub fn opt_f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.opt_str(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| ConfigError::BadValue {
                path: self.path.clone(),
                key: key.to_string(),
                message: format!("`{raw}` is not a number"),
            }),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<usize, ConfigError> {
        let raw = self.get_str(key)?;
        raw.parse().map_err(|_| ConfigError::BadValue {
            path: self.path.clone(),
            key: key.to_string(),
            message: format!("`{raw}` is not an integer"),
        })
    }

    pub fn opt_usize(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.opt_str(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| ConfigError::BadValue {
                path: self.path.clone(),
                key: key.to_string(),
                message: format!("`{raw}` is not an integer"),
            }),
        }
    }

    /// Errors on the first key no consumer claimed.
    pub fn reject_unknown(&self) -> Result<(), ConfigError> {
        for (k, e) in &self.entries {
            if !e.claimed.get() {
                return Err(ConfigError::UnknownKey {
                    path: self.path.clone(),
                    key: k.clone(),
                    line: e.line,
                });
            }
        }
        Ok(())
    }

    fn bad(&self, key: &str, message: String) -> ConfigError {
        ConfigError::BadValue {
            path: self.path.clone(),
            key: key.to_string(),
            message,
        }
    }

    // -- domain object readers ------------------------------------------

    /// Reads a `(phi, f, l)` triple under the `triple.` prefix.
    pub fn read_triple(&self) -> Result<Triple, ConfigError> {
        let phi = match self.get_str("triple.phi.family")? {
            "plaplace" => PhiFunction::power_law(self.get_f64("triple.phi.p")?),
            "meancurvature" => PhiFunction::MeanCurvature,
            "expharmonic" => PhiFunction::ExpHarmonic,
            "powersum" => PhiFunction::power_sum(
                self.get_f64("triple.phi.p")?,
                self.get_f64("triple.phi.q")?,
            ),
            "rational" => PhiFunction::rational_power(
                self.get_f64("triple.phi.p")?,
                self.get_f64("triple.phi.q")?,
            ),
            other => {
                return Err(self.bad("triple.phi.family", format!("unknown operator `{other}`")))
            }
        };
        let l = match self.opt_str("triple.l.family").unwrap_or("constant") {
            "constant" => GradientTerm::constant(self.opt_f64("triple.l.c", 1.0)?),
            "power" => GradientTerm::power(self.get_f64("triple.l.exponent")?),
            "phiquotient" => GradientTerm::phi_quotient(self.get_f64("triple.l.chi")?),
            other => {
                return Err(self.bad("triple.l.family", format!("unknown gradient term `{other}`")))
            }
        };
        let f = match self.opt_str("triple.f.family").unwrap_or("power") {
            "power" => Nonlinearity::power_above(
                self.get_f64("triple.f.omega")?,
                self.opt_f64("triple.f.threshold", 0.0)?,
            ),
            "exp2m1" => Nonlinearity::Exp2m1,
            other => {
                return Err(self.bad("triple.f.family", format!("unknown nonlinearity `{other}`")))
            }
        };
        Ok(Triple::new(phi, f, l))
    }

    /// Reads a weight profile under the given prefix (`beta`, `betabar`, ...).
    pub fn read_weight(&self, prefix: &str) -> Result<WeightProfile, ConfigError> {
        let fam_key = format!("{prefix}.family");
        match self.opt_str(&fam_key).unwrap_or("powerdecay") {
            "powerdecay" => Ok(WeightProfile::power_decay(
                self.get_f64(&format!("{prefix}.mu"))?,
                self.opt_f64(&format!("{prefix}.scale"), 1.0)?,
            )),
            other => Err(self.bad(&fam_key, format!("unknown weight family `{other}`"))),
        }
    }

    /// Reads a model manifold under the `model.` prefix.
    pub fn read_model(&self) -> Result<ModelManifold, ConfigError> {
        let dim = self.get_usize("model.dim")?;
        match self.get_str("model.family")? {
            "euclidean" => Ok(ModelManifold::euclidean(dim)),
            "hyperbolic" => Ok(ModelManifold::hyperbolic(dim, self.get_f64("model.kappa")?)),
            "pinch" => Ok(ModelManifold::example_pinch(dim, self.get_f64("model.delta")?)),
            "fromjacobi" => {
                let kappa = self.get_f64("model.kappa")?;
                let alpha = self.get_f64("model.alpha")?;
                let r_max = self.opt_f64("model.rmax", 2048.0)?;
                Ok(ModelManifold::from_jacobi(
                    dim,
                    CurvatureProfile::PowerOneR2 { kappa, alpha },
                    r_max,
                ))
            }
            "exponential" => {
                let kappa = self.get_f64("model.kappa")?;
                Ok(ModelManifold::custom(
                    dim,
                    Arc::new(move |r: f64| (kappa * r).exp()),
                    Some(Arc::new(move |r: f64| kappa * (kappa * r).exp())),
                    crate::model::Origin::Boundary { offset: 0.0 },
                ))
            }
            other => Err(self.bad("model.family", format!("unknown model family `{other}`"))),
        }
    }
}

/// Writes a CSV file: header row, full double precision (17 significant
/// digits), `\n` line endings, no locale formatting.
pub fn write_csv(
    path: &str,
    headers: &[&str],
    columns: &[&[f64]],
) -> Result<(), std::io::Error> {
    assert_eq!(headers.len(), columns.len());
    let rows = columns.first().map(|c| c.len()).unwrap_or(0);
    assert!(columns.iter().all(|c| c.len() == rows));
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for i in 0..rows {
        for (j, col) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{:.16e}", col[i]));
        }
        out.push('\n');
    }
    std::fs::write(path, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip() {
        let text = "# comment\nop = ko\ntriple.phi.family = plaplace\ntriple.phi.p = 2.5\n";
        let cfg = Config::parse("test", text).unwrap();
        assert_eq!(cfg.get_str("op").unwrap(), "ko");
        let canon = cfg.to_text();
        let cfg2 = Config::parse("round", &canon).unwrap();
        assert_eq!(canon, cfg2.to_text());
    }

    #[test]
    fn unknown_key_has_location() {
        let cfg = Config::parse("t", "op = ko\nwrong.key = 1\n").unwrap();
        let _ = cfg.get_str("op");
        match cfg.reject_unknown() {
            Err(ConfigError::UnknownKey { key, line, .. }) => {
                assert_eq!(key, "wrong.key");
                assert_eq!(line, 2);
            }
            other => panic!("expected unknown-key error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_position() {
        match Config::parse("t", "op = ko\nnonsense line\n") {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reads_triple() {
        let text = "triple.phi.family = plaplace\ntriple.phi.p = 3\n\
                    triple.l.family = phiquotient\ntriple.l.chi = 1\n\
                    triple.f.family = power\ntriple.f.omega = 2\n";
        let cfg = Config::parse("t", text).unwrap();
        let triple = cfg.read_triple().unwrap();
        cfg.reject_unknown().unwrap();
        assert!((triple.phi.eval(2.0) - 4.0).abs() < 1e-12);
        assert!((triple.f.eval(3.0) - 9.0).abs() < 1e-12);
    }
}
