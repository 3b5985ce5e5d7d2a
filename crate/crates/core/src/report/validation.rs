use std::fmt::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{format_value, resolve, write_file};
use crate::error::{Error, Result};
use crate::oracle::{domain_advisor, solve_grid_spectrum, solve_potential, GridSpec};
use crate::potential::{derive_coefficients, BetaVariant, MoleculeParams, PotentialConfig};
use crate::spectrum::{momentum_eigenvalue, EigenvalueVariant};
use crate::units::UnitSystem;

/// Rows whose relative deviation from the grid value exceeds this are flagged.
pub const AGREEMENT_THRESHOLD: f64 = 0.01;

const BOX_POINTS: usize = 10_000;
const BOX_LEVELS: usize = 5;
const BOX_GATE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRequest {
    pub molecules: Vec<String>,
    pub alpha: f64,
    pub levels: Vec<usize>,
    pub beta_variant: BetaVariant,
    /// Replaces the advisor's point count when set; the interval is kept.
    pub num_points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub molecule: String,
    pub n: usize,
    pub variant: EigenvalueVariant,
    /// `None` if the variant excludes the level.
    pub value: Option<f64>,
    pub oracle: f64,
    pub oracle_error_estimate: Option<f64>,
    pub rel_deviation: Option<f64>,
    pub within_threshold: bool,
    pub grid: GridSpec,
}

/// The oracle's own gate: a free particle of the first molecule's mass in a
/// 1 ns box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSelfTest {
    pub grid: GridSpec,
    pub computed: Vec<f64>,
    pub exact: Vec<f64>,
    pub max_rel_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub alpha: f64,
    pub beta_variant: BetaVariant,
    pub rows: Vec<ValidationRow>,
    pub self_test: BoxSelfTest,
    pub ledger: Vec<String>,
}

fn box_self_test(mass: f64, units: &UnitSystem) -> Result<BoxSelfTest> {
    let mc2 = units.mass_energy(mass)?;
    let kinetic = units.kinetic_coefficient(mc2);
    let grid = GridSpec::new(0.0, 1.0, BOX_POINTS)?;
    let sol = solve_potential(grid, kinetic, |_| Ok(0.0), BOX_LEVELS)?;
    let exact: Vec<f64> = (1..=BOX_LEVELS)
        .map(|k| kinetic * (std::f64::consts::PI * k as f64).powi(2))
        .collect();
    let max_rel_deviation = sol
        .eigenvalues
        .iter()
        .zip(&exact)
        .map(|(c, e)| (c - e).abs() / e)
        .fold(0.0, f64::max);
    Ok(BoxSelfTest {
        grid,
        computed: sol.eigenvalues,
        exact,
        max_rel_deviation,
        passed: max_rel_deviation < BOX_GATE,
    })
}

fn molecule_rows(
    m: &MoleculeParams,
    request: &ValidationRequest,
    units: &UnitSystem,
) -> Result<Vec<ValidationRow>> {
    let config = PotentialConfig::new(m.clone(), request.alpha, request.beta_variant)?;
    let mut grid = domain_advisor(&config, units)?;
    if let Some(points) = request.num_points {
        grid = grid.with_points(points)?;
    }
    let count = request.levels.iter().max().map_or(1, |n| n + 1);
    let sol = solve_grid_spectrum(&config, units, grid, count)
        .map_err(|e| Error::Numerical(format!("grid solve for {}: {e}", m.name)))?;
    let coeffs = derive_coefficients(&config, units)?;
    let mut rows = Vec::new();
    for &n in &request.levels {
        let oracle = sol.eigenvalues[n];
        for v in EigenvalueVariant::ALL {
            let value = momentum_eigenvalue(&coeffs, n, v)
                .map_err(|e| Error::Numerical(format!("{}, n = {n}, {v}: {e}", m.name)))?
                .ok();
            let rel_deviation = value.map(|x| (x - oracle).abs() / oracle.abs());
            rows.push(ValidationRow {
                molecule: m.name.clone(),
                n,
                variant: v,
                value,
                oracle,
                oracle_error_estimate: sol.convergence.get(n).map(|c| c.error_estimate),
                rel_deviation,
                within_threshold: rel_deviation.is_some_and(|d| d <= AGREEMENT_THRESHOLD),
                grid,
            });
        }
    }
    Ok(rows)
}

fn ledger(rows: &[ValidationRow]) -> Vec<String> {
    let mut out = vec![
        "as-printed-eq22: adds the dimensionless coefficient A to an energy-valued term; values track A, not the spectrum".to_string(),
        "beta-times-a: energy-consistent repair of the printed formula; it follows the branch that is bounded at s = 0 but grows as s -> -inf".to_string(),
        "quantization-root: root of lambda(M) = lambda_n(M) on the branch that is square integrable on the physical s < 0 domain".to_string(),
    ];
    let mut keys: Vec<(String, EigenvalueVariant)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|(m, v)| *m == r.molecule && *v == r.variant) {
            keys.push((r.molecule.clone(), r.variant));
        }
    }
    for (m, v) in keys {
        let group: Vec<&ValidationRow> = rows.iter().filter(|r| r.molecule == m && r.variant == v).collect();
        let flagged = group.iter().filter(|r| !r.within_threshold).count();
        if flagged == 0 {
            continue;
        }
        let excluded = group.iter().filter(|r| r.value.is_none()).count();
        let mut ratios: Vec<f64> = group.iter().filter_map(|r| r.value.map(|x| x / r.oracle)).collect();
        ratios.sort_by(f64::total_cmp);
        let ratio = ratios
            .get(ratios.len() / 2)
            .map_or_else(|| "n/a".to_string(), |r| format!("{r:.6e}"));
        out.push(format!(
            "{m} {v}: {flagged} of {} levels outside {}% ({excluded} excluded); median value/grid = {ratio}",
            group.len(),
            AGREEMENT_THRESHOLD * 100.0
        ));
    }
    out
}

pub fn run_validation(
    request: &ValidationRequest,
    registry: &[MoleculeParams],
    units: &UnitSystem,
) -> Result<ValidationReport> {
    let molecules = resolve(registry, &request.molecules)?;
    if request.levels.is_empty() {
        return Err(Error::invalid("levels", "empty level list"));
    }
    let self_test = box_self_test(molecules[0].mu, units)?;
    let per: Vec<Vec<ValidationRow>> = molecules
        .par_iter()
        .map(|m| molecule_rows(m, request, units))
        .collect::<Result<_>>()?;
    let rows: Vec<ValidationRow> = per.into_iter().flatten().collect();
    let ledger = ledger(&rows);
    Ok(ValidationReport {
        alpha: request.alpha,
        beta_variant: request.beta_variant,
        rows,
        self_test,
        ledger,
    })
}

pub const VALIDATION_CSV_HEADER: &str =
    "molecule,n,variant,value,oracle,oracle_error,rel_deviation,flag,t_min,t_max,num_points";

impl ValidationReport {
    pub fn rows_for(&self, variant: EigenvalueVariant) -> impl Iterator<Item = &ValidationRow> {
        self.rows.iter().filter(move |r| r.variant == variant)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(VALIDATION_CSV_HEADER);
        s.push('\n');
        let g = &self.self_test.grid;
        for (k, (c, e)) in self.self_test.computed.iter().zip(&self.self_test.exact).enumerate() {
            let _ = writeln!(
                s,
                "box-self-test,{k},grid,{},{},,{},{},{},{},{}",
                format_value(*c),
                format_value(*e),
                format_value((c - e).abs() / e),
                if (c - e).abs() / e < BOX_GATE { "ok" } else { "FLAG" },
                format_value(g.t_min),
                format_value(g.t_max),
                g.num_points
            );
        }
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(format_value).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.molecule,
                r.n,
                r.variant,
                r.value.map(format_value).unwrap_or_else(|| super::EXCLUDED.into()),
                format_value(r.oracle),
                opt(r.oracle_error_estimate),
                opt(r.rel_deviation),
                if r.within_threshold { "ok" } else { "FLAG" },
                format_value(r.grid.t_min),
                format_value(r.grid.t_max),
                r.grid.num_points
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Validation: closed-form cP_n against the finite-difference grid (alpha = {} 1/ns, beta {})",
            self.alpha, self.beta_variant
        );
        let _ = writeln!(s, "Rows deviating more than {}% are flagged.\n", AGREEMENT_THRESHOLD * 100.0);
        let t = &self.self_test;
        let _ = writeln!(
            s,
            "box self-test: {} points on [{}, {}] ns, max deviation {:.3e} ({})\n",
            t.grid.num_points,
            t.grid.t_min,
            t.grid.t_max,
            t.max_rel_deviation,
            if t.passed { "ok" } else { "FLAG" }
        );
        let _ = writeln!(
            s,
            "{:<6} {:>2} {:<18} {:>20} {:>20} {:>12} {:>5}  grid",
            "mol", "n", "variant", "value (eV)", "grid (eV)", "rel dev", "flag"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<6} {:>2} {:<18} {:>20} {:>20} {:>12} {:>5}  [{:.6}, {:.6}] x {}",
                r.molecule,
                r.n,
                r.variant.label(),
                r.value.map(format_value).unwrap_or_else(|| super::EXCLUDED.into()),
                format_value(r.oracle),
                r.rel_deviation.map_or_else(|| "-".into(), |d| format!("{d:.3e}")),
                if r.within_threshold { "ok" } else { "FLAG" },
                r.grid.t_min,
                r.grid.t_max,
                r.grid.num_points
            );
        }
        let _ = writeln!(s, "\nDiscrepancy ledger:");
        for l in &self.ledger {
            let _ = writeln!(s, "- {l}");
        }
        s
    }

    /// Writes `<stem>.txt` and `<stem>.csv`.
    pub fn write(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        let txt = super::with_suffix(stem, "txt");
        let csv = super::with_suffix(stem, "csv");
        write_file(&txt, &self.to_text())?;
        write_file(&csv, &self.to_csv())?;
        Ok((txt, csv))
    }
}
