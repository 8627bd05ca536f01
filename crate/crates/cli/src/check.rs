//! `check`: validate a config and report the regime at `t = 0`.

use mbsim_core::{regime_report, MatterState};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::Result;
use crate::setup::prepare;

pub fn check(config: &RunConfig) -> Result<serde_json::Value> {
    let prep = prepare(config)?;
    let state = prep
        .coupler()?
        .initial_state(MatterState::new(prep.psi0.clone()))?;
    let r = regime_report(&state, &prep.params, prep.saturation)?;
    Ok(json!({
        "min_abs_detuning": r.min_abs_detuning,
        "detuning_threshold": state.local_detuning.threshold,
        "max_mossotti_denominator_proximity": r.max_mossotti_denominator_proximity,
        "saturation": prep.saturation,
        "saturation_bound": r.saturation_bound,
        "density_gradient_metric": r.density_gradient_metric,
        "scf_residual": state.residual,
        "transmission": state.optics.transmission.norm_sqr(),
        "reflection": state.optics.reflection.norm_sqr(),
        "g_eff": prep.g_eff,
    }))
}
