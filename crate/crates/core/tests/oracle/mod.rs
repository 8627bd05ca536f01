//! Independent references used only by the tests.

pub mod dd;

use dd::{Cdd, Dd};

/// Slab of constant real `n²` and thickness `width`.
#[derive(Debug, Clone, Copy)]
pub struct Slab {
    pub n_squared: f64,
    pub width: f64,
}

/// Characteristic matrix of one slab mapping `(E, E')` from its left to
/// its right face, in double-double arithmetic.
fn slab_matrix(slab: Slab, k: f64) -> [[Dd; 2]; 2] {
    let k = Dd::from(k);
    let h = Dd::from(slab.width);
    if slab.n_squared >= 0.0 {
        let q = k * Dd::from(slab.n_squared).sqrt();
        let phase = q * h;
        let (s, c) = (phase.sin(), phase.cos());
        let s_over_q = if slab.n_squared == 0.0 { h } else { s / q };
        [[c, s_over_q], [-(q * s), c]]
    } else {
        let kappa = k * Dd::from(-slab.n_squared).sqrt();
        let phase = kappa * h;
        let (sh, ch) = (phase.sinh(), phase.cosh());
        [[ch, sh / kappa], [kappa * sh, ch]]
    }
}

fn mat_mul(a: [[Dd; 2]; 2], b: [[Dd; 2]; 2]) -> [[Dd; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Reflection and transmission amplitudes of a slab stack in vacuum, for
/// a unit wave incident from the left. Phase references match the solver:
/// reflected wave relative to the left face, transmitted wave relative to
/// the right face.
pub fn stack_rt(slabs: &[Slab], k: f64) -> (Cdd, Cdd) {
    let one = Dd::from(1.0);
    let zero = Dd::from(0.0);
    let mut m = [[one, zero], [zero, one]];
    for &s in slabs {
        m = mat_mul(slab_matrix(s, k), m);
    }
    let kd = Dd::from(k);
    let ik = Cdd::new(zero, kd);
    let re = |x: Dd| Cdd::new(x, zero);
    // t = m11 (1 + r) + ik m12 (1 - r);  ik t = m21 (1 + r) + ik m22 (1 - r)
    let a = ik * re(m[0][0]) - re(m[1][0]);
    let b = re(-(kd * kd * m[0][1])) - ik * re(m[1][1]);
    let r = -(a + b) / (a - b);
    let c_one = re(one);
    let t = re(m[0][0]) * (c_one + r) + ik * re(m[0][1]) * (c_one - r);
    (r, t)
}

/// `|t|²` of a uniform slab of index `n` and thickness `l` in vacuum.
pub fn airy_transmission(n: f64, k: f64, l: f64) -> f64 {
    let s = (k * n * l).sin();
    1.0 / (1.0 + (n * n - 1.0).powi(2) / (4.0 * n * n) * s * s)
}
