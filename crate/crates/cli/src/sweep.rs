//! SNR sweeps across methods.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rician_lowsnr::asymptotics::{
    capacity_asymptotic, capacity_asymptotic_simple, capacity_awgn_limit, energy_efficiency,
    EnergyMode,
};
use rician_lowsnr::exact::capacity_exact;
use rician_lowsnr::onoff::{
    build_policy, rate, simulate_throughput, ThresholdSource, MIN_SIMULATION_SLOTS,
};
use rician_lowsnr::{ChannelSpec64, NumericConfig64, RandomStream};

use crate::error::{CliError, CliResult};
use crate::output::quantize_opt;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Exact,
    AsymptoticRegime,
    AsymptoticSimple,
    AwgnLimit,
    Onoff,
    OnoffMc,
    /// Energy-per-nat columns.
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
}

impl Preset {
    /// `(K, L, Ω, methods)`; `Ω = 1` is an assumption, the figures do not state it.
    pub fn parameters(self) -> (f64, u32, f64, Vec<SweepMethod>) {
        use SweepMethod::*;
        match self {
            Preset::Fig1 => (
                1.0,
                3,
                1.0,
                vec![Exact, AsymptoticRegime, AsymptoticSimple, AwgnLimit, Onoff],
            ),
            Preset::Fig2 => (
                2.0,
                2,
                1.0,
                vec![Exact, AsymptoticRegime, AsymptoticSimple, AwgnLimit, Onoff],
            ),
            Preset::Fig3 => (1.0, 3, 1.0, vec![Exact, AsymptoticSimple, Energy]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
        }
    }

    pub fn metadata(self) -> String {
        let (k, l, omega, _) = self.parameters();
        format!(
            "preset {}: K={k} L={l} omega={omega} (omega assumed, not stated for the figure)",
            self.name()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub spec: ChannelSpec64,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub methods: Vec<SweepMethod>,
    pub seed: u64,
    pub mc_samples: usize,
    /// Report capacities in bits instead of nats.
    pub bits: bool,
}

impl SweepRequest {
    pub fn validate(&self) -> CliResult<()> {
        let finite = [self.snr_db_start, self.snr_db_stop, self.snr_db_step]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.snr_db_start >= self.snr_db_stop {
            return Err(CliError::Usage(format!(
                "snr grid needs finite start < stop (got {} .. {})",
                self.snr_db_start, self.snr_db_stop
            )));
        }
        if self.snr_db_step <= 0.0 {
            return Err(CliError::Usage(format!(
                "snr step {} must be > 0",
                self.snr_db_step
            )));
        }
        if self.methods.is_empty() {
            return Err(CliError::Usage("no methods selected".into()));
        }
        if self.methods.contains(&SweepMethod::OnoffMc) && self.mc_samples < MIN_SIMULATION_SLOTS {
            return Err(CliError::Usage(format!(
                "--mc-samples {} must be >= {MIN_SIMULATION_SLOTS} for onoff-mc",
                self.mc_samples
            )));
        }
        Ok(())
    }

    /// Inclusive dB grid; the stop value is kept when it lies on the grid.
    pub fn grid_db(&self) -> Vec<f64> {
        let n =
            ((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| self.snr_db_start + i as f64 * self.snr_db_step)
            .collect()
    }

    fn wants(&self, m: SweepMethod) -> bool {
        self.methods.contains(&m)
    }
}

/// One grid point. Empty cells are methods that were not requested or failed
/// (the failure is then named in `flags`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub snr_linear: f64,
    pub cap_exact_npcu: Option<f64>,
    pub cap_asym_regime_npcu: Option<f64>,
    pub cap_asym_simple_npcu: Option<f64>,
    pub cap_awgn_npcu: Option<f64>,
    pub rate_onoff_npcu: Option<f64>,
    pub rate_onoff_mc_npcu: Option<f64>,
    pub lambda_exact: Option<f64>,
    pub lambda_asym: Option<f64>,
    pub ee_csitr: Option<f64>,
    pub ee_csir: Option<f64>,
    /// `;`-separated `column:reason` markers.
    pub flags: String,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn compute_row(req: &SweepRequest, index: usize, snr_db: f64, cfg: &NumericConfig64) -> SweepRow {
    use SweepMethod::*;
    let spec = &req.spec;
    let snr = db_to_linear(snr_db);
    let unit = if req.bits {
        std::f64::consts::LN_2
    } else {
        1.0
    };
    let mut flags: Vec<String> = Vec::new();
    let mut note =
        |column: &str, reason: &dyn std::fmt::Display| flags.push(format!("{column}:{reason}"));

    let mut row = SweepRow {
        snr_db,
        snr_linear: snr,
        cap_exact_npcu: None,
        cap_asym_regime_npcu: None,
        cap_asym_simple_npcu: None,
        cap_awgn_npcu: None,
        rate_onoff_npcu: None,
        rate_onoff_mc_npcu: None,
        lambda_exact: None,
        lambda_asym: None,
        ee_csitr: None,
        ee_csir: None,
        flags: String::new(),
    };

    if req.wants(Exact) || req.wants(Energy) {
        match capacity_exact(spec, snr, cfg) {
            Ok(sol) => {
                row.cap_exact_npcu = Some(sol.capacity_nats / unit);
                row.lambda_exact = Some(sol.lambda);
                if req.wants(Energy) && sol.capacity_nats > 0.0 {
                    row.ee_csitr = Some(snr / sol.capacity_nats * unit);
                }
            }
            Err(e) => note("cap_exact", &e),
        }
    }
    if req.wants(Energy) {
        match energy_efficiency(spec, snr, EnergyMode::Csir, cfg) {
            Ok(v) => row.ee_csir = Some(v * unit),
            Err(e) => note("ee_csir", &e),
        }
    }
    if req.wants(AsymptoticRegime) {
        match capacity_asymptotic(spec, snr, false) {
            Ok(sol) => {
                row.cap_asym_regime_npcu = Some(sol.capacity_nats / unit);
                row.lambda_asym = Some(sol.lambda);
                if !sol.in_regime {
                    note("cap_asym_regime", &"out_of_regime");
                }
            }
            Err(e) => note("cap_asym_regime", &e),
        }
    }
    if req.wants(AsymptoticSimple) {
        match capacity_asymptotic_simple(spec, snr) {
            Ok(sol) => {
                row.cap_asym_simple_npcu = Some(sol.capacity_nats / unit);
                if !sol.in_regime {
                    note("cap_asym_simple", &"out_of_regime");
                }
            }
            Err(e) => note("cap_asym_simple", &e),
        }
    }
    if req.wants(AwgnLimit) {
        match capacity_awgn_limit(spec, snr) {
            Ok(a) => row.cap_awgn_npcu = Some(a.linearized_nats / unit),
            Err(e) => note("cap_awgn", &e),
        }
    }
    if req.wants(Onoff) || req.wants(OnoffMc) {
        match build_policy(spec, snr, ThresholdSource::ExactLambda, cfg) {
            Ok(policy) => {
                if req.wants(Onoff) {
                    match rate(spec, &policy, cfg) {
                        Ok(r) => row.rate_onoff_npcu = Some(r / unit),
                        Err(e) => note("rate_onoff", &e),
                    }
                }
                if req.wants(OnoffMc) {
                    let stream = RandomStream::new(req.seed, index as u64);
                    match simulate_throughput(spec, &policy, stream, req.mc_samples) {
                        Ok(est) => row.rate_onoff_mc_npcu = Some(est.rate_estimate / unit),
                        Err(e) => note("rate_onoff_mc", &e),
                    }
                }
            }
            Err(e) => note("rate_onoff", &e),
        }
    }

    row.flags = flags.join(";").replace(['\n', ','], " ");
    quantize_row(row)
}

fn quantize_row(mut row: SweepRow) -> SweepRow {
    row.snr_db = crate::output::quantize(row.snr_db);
    row.snr_linear = crate::output::quantize(row.snr_linear);
    for cell in [
        &mut row.cap_exact_npcu,
        &mut row.cap_asym_regime_npcu,
        &mut row.cap_asym_simple_npcu,
        &mut row.cap_awgn_npcu,
        &mut row.rate_onoff_npcu,
        &mut row.rate_onoff_mc_npcu,
        &mut row.lambda_exact,
        &mut row.lambda_asym,
        &mut row.ee_csitr,
        &mut row.ee_csir,
    ] {
        *cell = quantize_opt(*cell);
    }
    row
}

/// Runs the sweep on the current rayon pool; rows come back in grid order.
pub fn run_sweep(req: &SweepRequest, cfg: &NumericConfig64) -> CliResult<Vec<SweepRow>> {
    req.validate()?;
    let grid = req.grid_db();
    Ok(grid
        .par_iter()
        .enumerate()
        .map(|(i, &db)| compute_row(req, i, db, cfg))
        .collect())
}
