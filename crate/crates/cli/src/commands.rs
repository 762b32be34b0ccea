use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ffmwrc_core::code::ensemble::{run_codecheck, CodeCheckMode, CodeCheckReport};
use ffmwrc_core::fdf::{monte_carlo, CodeDims, MonteCarloSummary, SimulationSetup, SubBlockSchedule};
use ffmwrc_core::field::FieldSpec;
use ffmwrc_core::regions::{
    boundary_csv, export_boundary, BinaryTwrc, CdfRegion, CutSetRegion, FdfSeparateRegion, Membership, RateRegion,
    RegionPoint, TOLERANCE,
};
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, Scenario};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionSelector {
    Capacity,
    Cdf,
    FdfSeparate,
    All,
}

pub const DEFAULT_POINTS: usize = 200;

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// `dir/stem-suffix`, where `stem` is the file name of `path` without its
/// extension.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}-{suffix}"))
}

fn binary_twrc(scenario: &Scenario) -> Result<BinaryTwrc, CliError> {
    BinaryTwrc::from_params(&scenario.params)
        .map_err(|e| CliError::Config(format!("this region needs a binary two-way relay channel: {e}")))
}

fn regions_for(
    scenario: &Scenario,
    selector: RegionSelector,
    grid_step: f64,
) -> Result<Vec<(&'static str, Box<dyn RateRegion>)>, CliError> {
    let mut out: Vec<(&'static str, Box<dyn RateRegion>)> = Vec::new();
    let wanted = |s: RegionSelector| selector == s || selector == RegionSelector::All;
    if wanted(RegionSelector::Capacity) {
        out.push(("capacity", Box::new(CutSetRegion::new(&scenario.params))));
    }
    if selector != RegionSelector::Capacity {
        let twrc = binary_twrc(scenario)?;
        if wanted(RegionSelector::FdfSeparate) {
            let r = FdfSeparateRegion::new(&twrc, grid_step).map_err(|e| CliError::Config(e.to_string()))?;
            out.push(("fdf-separate", Box::new(r)));
        }
        if wanted(RegionSelector::Cdf) {
            out.push(("cdf", Box::new(CdfRegion::new(&twrc))));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub rates: Vec<String>,
    pub verdicts: BTreeMap<String, Membership>,
    /// Exported points of the other regions that fall outside the capacity
    /// region (always 0 unless something is broken).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub containment_violations: Option<usize>,
    pub files: Vec<PathBuf>,
}

/// Writes boundary CSVs and a membership sidecar. With one region the CSV
/// goes to `out`; with `all`, to `<stem>-<region>.csv`. The sidecar is
/// `<stem>-membership.json` either way.
pub fn cmd_region(
    scenario: &Scenario,
    selector: RegionSelector,
    points: usize,
    grid_step: f64,
    out: &Path,
) -> Result<MembershipReport, CliError> {
    let regions = regions_for(scenario, selector, grid_step)?;
    let rates = scenario.rates.to_f64();
    let mut verdicts = BTreeMap::new();
    let mut files = Vec::new();
    let mut exported: Vec<(&str, Vec<RegionPoint>)> = Vec::new();
    for (name, region) in &regions {
        verdicts.insert(name.to_string(), region.membership(&rates));
        let pts = export_boundary(region.as_ref(), points).map_err(|e| CliError::Config(e.to_string()))?;
        let path = if selector == RegionSelector::All {
            sibling(out, &format!("{name}.csv"))
        } else {
            out.to_path_buf()
        };
        write(&path, &boundary_csv(&pts, region.num_users()))?;
        files.push(path);
        exported.push((name, pts));
    }
    let containment_violations = (selector == RegionSelector::All).then(|| {
        let cap = CutSetRegion::new(&scenario.params);
        exported
            .iter()
            .filter(|(name, _)| *name != "capacity")
            .flat_map(|(_, pts)| pts)
            .filter(|p| {
                let shrunk: Vec<f64> = p.rates.iter().map(|r| (r - 1e-6).max(0.0)).collect();
                !cap.membership(&shrunk).is_member()
            })
            .count()
    });
    let sidecar = sibling(out, "membership.json");
    files.push(sidecar.clone());
    let report = MembershipReport {
        rates: scenario.config.rates.clone(),
        verdicts,
        containment_violations,
        files,
    };
    write(&sidecar, &json(&report))?;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: RunConfig,
    pub schedule: SubBlockSchedule,
    pub code_dims: CodeDims,
    /// Block pairs per simulated frame. Pipelining `T` blocks would cost a
    /// factor `T / (T + 1)` in rate; a single pair is simulated.
    pub pipeline_blocks: u32,
    pub forced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<MonteCarloSummary>,
}

/// Runs the Monte Carlo simulation. An infeasible configuration writes its
/// verdict and returns [`CliError::Infeasible`] unless `force` is set.
pub fn cmd_simulate(
    scenario: &Scenario,
    threads: Option<usize>,
    force: bool,
    out: &Path,
) -> Result<SimulationReport, CliError> {
    let setup = SimulationSetup::new(
        scenario.params.clone(),
        scenario.rates.clone(),
        scenario.config.n_base,
        scenario.config.safety_margin,
        scenario.decoder(),
    )?;
    let mut report = SimulationReport {
        config: scenario.config.clone(),
        schedule: setup.schedule.clone(),
        code_dims: setup.dims.clone(),
        pipeline_blocks: 1,
        forced: force,
        summary: None,
    };
    if !setup.feasibility().feasible && !force {
        write(out, &json(&report))?;
        return Err(CliError::Infeasible(setup.feasibility().reasons.join("; ")));
    }
    report.summary = Some(monte_carlo(&setup, scenario.config.trials, scenario.config.seed, threads)?);
    write(out, &json(&report))?;
    Ok(report)
}

pub fn cmd_codecheck(
    k: usize,
    n: usize,
    field_order: u32,
    samples: u64,
    seed: u64,
    mode: CodeCheckMode,
    out: Option<&Path>,
) -> Result<CodeCheckReport, CliError> {
    let field = FieldSpec::new(field_order).map_err(|e| CliError::Config(format!("field: {e}")))?;
    let report = run_codecheck(k, n, field, samples, seed, mode).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(path) = out {
        write(path, &json(&report))?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub region: String,
    pub verdict: Membership,
    /// Largest `R` with `(R, ..., R)` in the region.
    pub max_common_rate: f64,
    /// Largest sum rate among the exported boundary points.
    pub max_sum_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rates: Vec<String>,
    pub strategies: Vec<StrategySummary>,
    /// Whether the simulated scheme's codes fit at the configured `n_base`.
    pub protocol_feasible: bool,
    pub protocol_reasons: Vec<String>,
}

fn max_common_rate(region: &dyn RateRegion) -> f64 {
    let l = region.num_users();
    let (mut lo, mut hi) = (0.0, region.extent() + 1.0);
    if !region.membership(&vec![0.0; l]).is_member() {
        return 0.0;
    }
    while hi - lo > TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if region.membership(&vec![mid; l]).is_member() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Places the configured rate tuple against every applicable region and
/// summarizes each region's common and sum rate. The binary two-way case
/// adds the two comparison schemes; otherwise only the capacity region is
/// available.
pub fn cmd_compare(scenario: &Scenario, points: usize, grid_step: f64) -> Result<ComparisonReport, CliError> {
    let selector = if BinaryTwrc::from_params(&scenario.params).is_ok() {
        RegionSelector::All
    } else {
        RegionSelector::Capacity
    };
    let rates = scenario.rates.to_f64();
    let mut strategies = Vec::new();
    for (name, region) in regions_for(scenario, selector, grid_step)? {
        let boundary = export_boundary(region.as_ref(), points).map_err(|e| CliError::Config(e.to_string()))?;
        strategies.push(StrategySummary {
            region: name.to_string(),
            verdict: region.membership(&rates),
            max_common_rate: max_common_rate(region.as_ref()),
            max_sum_rate: boundary.iter().map(|p| p.rates.iter().sum::<f64>()).fold(0.0, f64::max),
        });
    }
    let setup = SimulationSetup::new(
        scenario.params.clone(),
        scenario.rates.clone(),
        scenario.config.n_base,
        scenario.config.safety_margin,
        scenario.decoder(),
    )?;
    Ok(ComparisonReport {
        rates: scenario.config.rates.clone(),
        strategies,
        protocol_feasible: setup.feasibility().feasible,
        protocol_reasons: setup.feasibility().reasons.clone(),
    })
}

pub fn write_comparison(report: &ComparisonReport, out: &Path) -> Result<(), CliError> {
    write(out, &json(report))
}
