//! Binary snapshot files.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic    8 bytes  "MBSNAP\0\0"
//! version  u32
//! n        u64      grid points
//! length   f64
//! x0       f64      position of sample 0
//! time     f64
//! count    u32      number of arrays
//! then per array:
//!   name_len u16, name (UTF-8), kind u8 (0 real, 1 complex),
//!   len u64, len (or 2·len, interleaved re/im) f64 values
//! ```

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use mbsim_core::{density, norm_squared, regime_report, Complex64, CoupledState, PhysicalParams};

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 8] = b"MBSNAP\0\0";
pub const VERSION: u32 = 1;

/// Names of the four regime entries stored in the `regime` array.
pub const REGIME_FIELDS: [&str; 4] = [
    "min_abs_detuning",
    "max_mossotti_denominator_proximity",
    "saturation_bound",
    "density_gradient_metric",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Array {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Array {
    pub fn len(&self) -> usize {
        match self {
            Array::Real(v) => v.len(),
            Array::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n_points: usize,
    pub length: f64,
    pub x0: f64,
    pub time: f64,
    pub arrays: Vec<(String, Array)>,
}

impl Snapshot {
    pub fn get(&self, name: &str) -> Option<&Array> {
        self.arrays.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn real(&self, name: &str) -> Option<&[f64]> {
        match self.get(name)? {
            Array::Real(v) => Some(v),
            Array::Complex(_) => None,
        }
    }

    pub fn complex(&self, name: &str) -> Option<&[Complex64]> {
        match self.get(name)? {
            Array::Complex(v) => Some(v),
            Array::Real(_) => None,
        }
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_points).map(|j| self.x0 + j as f64 * h).collect()
    }

    fn push_real(&mut self, name: &str, v: Vec<f64>) {
        self.arrays.push((name.into(), Array::Real(v)));
    }

    /// Full record of a coupled state. Every array is recomputable from
    /// `psi1` and the run parameters.
    pub fn from_state(
        state: &CoupledState,
        params: &PhysicalParams,
        saturation: f64,
    ) -> Result<Self> {
        let psi = &state.matter.psi1;
        let grid = psi.grid();
        let report = regime_report(state, params, saturation)?;
        let mut snap = Snapshot {
            n_points: grid.n_points(),
            length: grid.length(),
            x0: grid.origin(),
            time: state.matter.time,
            arrays: Vec::new(),
        };
        snap.arrays
            .push(("psi1".into(), Array::Complex(psi.values().to_vec())));
        snap.push_real("density", density(psi).into_values());
        snap.arrays.push((
            "n_squared".into(),
            Array::Complex(state.optics.profile.n_squared().to_vec()),
        ));
        snap.arrays.push((
            "envelope".into(),
            Array::Complex(state.optics.envelope.values().to_vec()),
        ));
        snap.push_real("potential", state.potential.values().to_vec());
        snap.push_real("delta_l", state.local_detuning.values.values().to_vec());
        snap.push_real(
            "regime",
            vec![
                report.min_abs_detuning,
                report.max_mossotti_denominator_proximity,
                report.saturation_bound,
                report.density_gradient_metric,
            ],
        );
        snap.push_real("norm", vec![norm_squared(psi)]);
        snap.arrays.push((
            "scattering".into(),
            Array::Complex(vec![state.optics.reflection, state.optics.transmission]),
        ));
        Ok(snap)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n_points as u64).to_le_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        out.extend_from_slice(&self.x0.to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        out.extend_from_slice(&(self.arrays.len() as u32).to_le_bytes());
        for (name, array) in &self.arrays {
            out.extend_from_slice(&(name.len() as u16).to_le_bytes());
            out.extend_from_slice(name.as_bytes());
            match array {
                Array::Real(v) => {
                    out.push(0);
                    out.extend_from_slice(&(v.len() as u64).to_le_bytes());
                    for x in v {
                        out.extend_from_slice(&x.to_le_bytes());
                    }
                }
                Array::Complex(v) => {
                    out.push(1);
                    out.extend_from_slice(&(v.len() as u64).to_le_bytes());
                    for z in v {
                        out.extend_from_slice(&z.re.to_le_bytes());
                        out.extend_from_slice(&z.im.to_le_bytes());
                    }
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> std::result::Result<Self, String> {
        let mut r = bytes;
        let mut magic = [0u8; 8];
        read_exact(&mut r, &mut magic)?;
        if &magic != MAGIC {
            return Err("bad magic".into());
        }
        let version = u32::from_le_bytes(take(&mut r)?);
        if version != VERSION {
            return Err(format!("unsupported version {version}"));
        }
        let n_points = usize::try_from(u64::from_le_bytes(take(&mut r)?))
            .map_err(|_| "grid size overflows usize".to_string())?;
        let length = f64::from_le_bytes(take(&mut r)?);
        let x0 = f64::from_le_bytes(take(&mut r)?);
        let time = f64::from_le_bytes(take(&mut r)?);
        let count = u32::from_le_bytes(take(&mut r)?);
        let mut arrays = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let name_len = u16::from_le_bytes(take(&mut r)?) as usize;
            let mut name = vec![0u8; name_len];
            read_exact(&mut r, &mut name)?;
            let name =
                String::from_utf8(name).map_err(|_| "array name is not UTF-8".to_string())?;
            let [kind] = take::<1>(&mut r)?;
            let len = u64::from_le_bytes(take(&mut r)?) as usize;
            let per = match kind {
                0 => 1,
                1 => 2,
                k => return Err(format!("array {name}: unknown kind {k}")),
            };
            if len.checked_mul(8 * per).is_none_or(|b| b > r.len()) {
                return Err(format!("array {name}: truncated"));
            }
            let mut floats = Vec::with_capacity(len * per);
            for _ in 0..len * per {
                floats.push(f64::from_le_bytes(take(&mut r)?));
            }
            let array = if kind == 0 {
                Array::Real(floats)
            } else {
                Array::Complex(
                    floats
                        .chunks_exact(2)
                        .map(|c| Complex64::new(c[0], c[1]))
                        .collect(),
                )
            };
            arrays.push((name, array));
        }
        if !r.is_empty() {
            return Err(format!("{} trailing bytes", r.len()));
        }
        Ok(Snapshot {
            n_points,
            length,
            x0,
            time,
            arrays,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        f.write_all(&self.to_bytes())
            .map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| CliError::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|reason| CliError::Snapshot {
            path: path.to_path_buf(),
            reason,
        })
    }

    /// Plain-text export: one row per grid point, one column per grid
    /// array (complex arrays as `_re`/`_im` pairs); short arrays go in the
    /// header.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# mbsim snapshot v{VERSION}");
        let _ = writeln!(s, "# time {:.17e}", self.time);
        let _ = writeln!(
            s,
            "# n_points {} length {:.17e} x0 {:.17e}",
            self.n_points, self.length, self.x0
        );
        let (grid_arrays, scalars): (Vec<_>, Vec<_>) = self
            .arrays
            .iter()
            .partition(|(_, a)| a.len() == self.n_points);
        for (name, a) in scalars {
            let _ = write!(s, "# {name}");
            match a {
                Array::Real(v) => v.iter().for_each(|x| {
                    let _ = write!(s, " {x:.17e}");
                }),
                Array::Complex(v) => v.iter().for_each(|z| {
                    let _ = write!(s, " {:.17e} {:.17e}", z.re, z.im);
                }),
            }
            s.push('\n');
        }
        s.push_str("# x");
        for (name, a) in &grid_arrays {
            match a {
                Array::Real(_) => {
                    let _ = write!(s, " {name}");
                }
                Array::Complex(_) => {
                    let _ = write!(s, " {name}_re {name}_im");
                }
            }
        }
        s.push('\n');
        for (j, x) in self.positions().into_iter().enumerate() {
            let _ = write!(s, "{x:.17e}");
            for (_, a) in &grid_arrays {
                match a {
                    Array::Real(v) => {
                        let _ = write!(s, " {:.17e}", v[j]);
                    }
                    Array::Complex(v) => {
                        let _ = write!(s, " {:.17e} {:.17e}", v[j].re, v[j].im);
                    }
                }
            }
            s.push('\n');
        }
        s
    }
}

fn read_exact(r: &mut &[u8], buf: &mut [u8]) -> std::result::Result<(), String> {
    r.read_exact(buf)
        .map_err(|_| "unexpected end of file".to_string())
}

fn take<const N: usize>(r: &mut &[u8]) -> std::result::Result<[u8; N], String> {
    let mut buf = [0u8; N];
    read_exact(r, &mut buf)?;
    Ok(buf)
}
