//! Run manifest embedded in every output file.
//!
//! The manifest holds everything that determines the numbers: the command,
//! its effective parameters, a digest of the resolved configuration, the
//! constants and the tolerance. Wall time is deliberately left out so that
//! equal manifests give byte-identical files; it goes to stderr instead.

use std::fmt::Write as _;

use lifshitz_core::{PhysicalConstants, Tolerance, CODATA_2018};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct ConfigDigest {
    pub path: String,
    /// SHA-256 of the resolved (parsed and linked) configuration.
    pub sha256: String,
}

impl ConfigDigest {
    pub fn of<T: std::fmt::Debug>(path: &std::path::Path, resolved: &T) -> Self {
        let digest = Sha256::digest(format!("{resolved:?}").as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        ConfigDigest {
            path: path.display().to_string(),
            sha256: hex,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceSettings {
    pub rel: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub program: String,
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub config: Option<ConfigDigest>,
    pub constants: PhysicalConstants,
    pub tolerance: ToleranceSettings,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, tol: Tolerance) -> Self {
        RunManifest {
            program: format!("lifshitz {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            parameters: Vec::new(),
            config: None,
            constants: CODATA_2018,
            tolerance: ToleranceSettings {
                rel: tol.rel,
                abs: tol.abs,
            },
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    /// `#`-prefixed comment block for CSV files.
    pub fn csv_header(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.program);
        let _ = writeln!(out, "# command: {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "# {k}: {v}");
        }
        match &self.config {
            Some(c) => {
                let _ = writeln!(out, "# config: {} sha256={}", c.path, c.sha256);
            }
            None => {
                let _ = writeln!(out, "# config: none");
            }
        }
        let _ = writeln!(out, "# constants: {}", self.constants.header_line());
        let _ = writeln!(
            out,
            "# tolerance: rel={:e} abs={:e}",
            self.tolerance.rel, self.tolerance.abs
        );
        let _ = writeln!(out, "# outputs: {}", self.outputs.join(", "));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_lines_are_comments() {
        let mut m = RunManifest::new("cd-table", Tolerance::default());
        m.param("eps0", "1.5,3.81");
        m.outputs.push("stdout".into());
        let h = m.csv_header();
        assert!(h.lines().all(|l| l.starts_with("# ")));
        assert!(h.contains("k_B=1.380649e-23"));
        assert!(h.contains("# eps0: 1.5,3.81"));
    }

    #[test]
    fn digest_tracks_content() {
        let p = std::path::Path::new("x.toml");
        let a = ConfigDigest::of(p, &(1.0f64, 2.0f64));
        let b = ConfigDigest::of(p, &(1.0f64, 2.0f64));
        let c = ConfigDigest::of(p, &(1.0f64, 2.000_000_1f64));
        assert_eq!(a.sha256, b.sha256);
        assert_ne!(a.sha256, c.sha256);
        assert_eq!(a.sha256.len(), 64);
    }
}
