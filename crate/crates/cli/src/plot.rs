//! Plot-ready columnar text from snapshot files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::snapshot::Snapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Density,
    /// `|𝓔|²`
    Intensity,
    /// Real and imaginary parts of `n²`.
    NSquared,
    Potential,
    LocalDetuning,
    /// Unwrapped phase of `ψ₁`.
    Phase,
}

pub const QUANTITY_NAMES: &[&str] = &["density", "intensity", "n2", "V", "delta_l", "phase"];

impl std::str::FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "density" | "rho" => Quantity::Density,
            "intensity" => Quantity::Intensity,
            "n2" | "n²" | "n_squared" => Quantity::NSquared,
            "V" | "v" | "potential" => Quantity::Potential,
            "delta_l" | "Δ_l" => Quantity::LocalDetuning,
            "phase" => Quantity::Phase,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown quantity `{other}`; valid names: {}",
                    QUANTITY_NAMES.join(", ")
                )))
            }
        })
    }
}

impl Quantity {
    fn label(self) -> &'static str {
        match self {
            Quantity::Density => "density",
            Quantity::Intensity => "intensity",
            Quantity::NSquared => "n2_re\tn2_im",
            Quantity::Potential => "V",
            Quantity::LocalDetuning => "delta_l",
            Quantity::Phase => "phase",
        }
    }
}

/// Adds multiples of 2π so consecutive samples differ by at most π.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (j, &p) in wrapped.iter().enumerate() {
        if j > 0 {
            let jump = p - wrapped[j - 1];
            offset -= tau * (jump / tau).round();
        }
        out.push(p + offset);
    }
    out
}

fn missing(path: &Path, name: &str) -> CliError {
    CliError::Snapshot {
        path: path.to_path_buf(),
        reason: format!("no `{name}` array"),
    }
}

/// Columns `(value...)` for one snapshot.
pub fn columns(snap: &Snapshot, q: Quantity, path: &Path) -> Result<Vec<Vec<f64>>> {
    let real = |name: &str| snap.real(name).ok_or_else(|| missing(path, name));
    let complex = |name: &str| snap.complex(name).ok_or_else(|| missing(path, name));
    Ok(match q {
        Quantity::Density => vec![real("density")?.to_vec()],
        Quantity::Intensity => vec![complex("envelope")?.iter().map(|z| z.norm_sqr()).collect()],
        Quantity::NSquared => {
            let n2 = complex("n_squared")?;
            vec![
                n2.iter().map(|z| z.re).collect(),
                n2.iter().map(|z| z.im).collect(),
            ]
        }
        Quantity::Potential => vec![real("potential")?.to_vec()],
        Quantity::LocalDetuning => vec![real("delta_l")?.to_vec()],
        Quantity::Phase => {
            let wrapped: Vec<f64> = complex("psi1")?.iter().map(|z| z.arg()).collect();
            vec![unwrap_phase(&wrapped)]
        }
    })
}

/// Snapshot files matching a glob, sorted by name.
pub fn expand_glob(pattern: &str) -> Result<Vec<PathBuf>> {
    let paths =
        glob::glob(pattern).map_err(|e| CliError::Usage(format!("bad glob `{pattern}`: {e}")))?;
    let mut files = Vec::new();
    for p in paths {
        files.push(p.map_err(|e| {
            let path = e.path().to_path_buf();
            CliError::io(path, e.into())
        })?);
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("no snapshot matches `{pattern}`")));
    }
    Ok(files)
}

/// Formats one block per snapshot (separated by blank lines), each with
/// `#` header lines and `x value` rows.
pub fn plot_text(files: &[PathBuf], q: Quantity) -> Result<String> {
    let mut out = String::new();
    for (i, path) in files.iter().enumerate() {
        let snap = Snapshot::read(path)?;
        let cols = columns(&snap, q, path)?;
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# source {}", path.display());
        let _ = writeln!(out, "# time {:.17e}", snap.time);
        let _ = writeln!(out, "# x\t{}", q.label());
        for (j, x) in snap.positions().into_iter().enumerate() {
            let _ = write!(out, "{x:.17e}");
            for c in &cols {
                let _ = write!(out, "\t{:.17e}", c[j]);
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn emit_plot_data(pattern: &str, quantity: &str, out: &Path) -> Result<()> {
    let q: Quantity = quantity.parse()?;
    let files = expand_glob(pattern)?;
    let text = plot_text(&files, q)?;
    std::fs::write(out, text).map_err(|e| CliError::io(out, e))
}
