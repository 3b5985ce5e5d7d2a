//! Parameter scans (CSV + SVG) and the grid-vs-closed-form validation report.

pub mod svg;
mod validation;

pub use validation::{
    run_validation, BoxSelfTest, ValidationReport, ValidationRequest, ValidationRow, AGREEMENT_THRESHOLD,
};

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::{derive_coefficients, evaluate_potential, find_molecule, BetaVariant, MoleculeParams, PotentialConfig};
use crate::spectrum::{momentum_eigenvalue, EigenvalueVariant};
use crate::units::UnitSystem;
use svg::{LineChart, Series};

pub const CSV_HEADER: &str = "sweep_var,molecule,n,variant,value";
/// Marker in the `value` column for levels with no admissible eigenvalue.
pub const EXCLUDED: &str = "excluded";

/// 12 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanKind {
    PotentialVsTime,
    PnVsQ,
    PnVsAlpha,
    PnVsN,
}

impl ScanKind {
    pub const ALL: [ScanKind; 4] = [ScanKind::PotentialVsTime, ScanKind::PnVsQ, ScanKind::PnVsAlpha, ScanKind::PnVsN];

    pub fn label(self) -> &'static str {
        match self {
            ScanKind::PotentialVsTime => "potential-vs-time",
            ScanKind::PnVsQ => "pn-vs-q",
            ScanKind::PnVsAlpha => "pn-vs-alpha",
            ScanKind::PnVsN => "pn-vs-n",
        }
    }

    fn axis(self) -> &'static str {
        match self {
            ScanKind::PotentialVsTime => "t (ns)",
            ScanKind::PnVsQ => "q",
            ScanKind::PnVsAlpha => "alpha (1/ns)",
            ScanKind::PnVsN => "n",
        }
    }
}

impl fmt::Display for ScanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for ScanKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::invalid("kind", format!("unknown scan kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::invalid("sweep", format!("steps = {steps} < 2")));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(Error::invalid("sweep", format!("need start < stop, got {start}..{stop}")));
        }
        Ok(Self { start, stop, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let d = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + i as f64 * d })
            .collect()
    }
}

/// Parameters held fixed while one is swept.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedParams {
    pub alpha: f64,
    /// Overrides the registry `q` when set.
    pub q: Option<f64>,
    pub levels: Vec<usize>,
    pub beta_variant: BetaVariant,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            q: None,
            levels: vec![0, 1, 2, 3],
            beta_variant: BetaVariant::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub kind: ScanKind,
    pub molecules: Vec<String>,
    pub sweep: Sweep,
    pub fixed: FixedParams,
    pub variants: Vec<EigenvalueVariant>,
    /// Files are written to `<output>.csv` and `<output>.svg`.
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub sweep: f64,
    pub molecule: String,
    pub n: Option<usize>,
    pub variant: String,
    /// `None` for excluded levels.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub csv: String,
    pub svg: String,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
}

fn resolve(registry: &[MoleculeParams], names: &[String]) -> Result<Vec<MoleculeParams>> {
    if names.is_empty() {
        return Err(Error::invalid("molecules", "empty molecule list"));
    }
    names.iter().map(|n| find_molecule(registry, n).cloned()).collect()
}

/// Sweep values for `PnVsN`: distinct non-negative integers.
fn level_sweep(sweep: &Sweep) -> Result<Vec<usize>> {
    if sweep.start < 0.0 {
        return Err(Error::invalid("sweep", "levels must be non-negative"));
    }
    let mut ns: Vec<usize> = sweep.values().iter().map(|v| v.round() as usize).collect();
    ns.dedup();
    if ns.len() != sweep.steps {
        return Err(Error::invalid("sweep", format!("{} steps do not give distinct levels", sweep.steps)));
    }
    Ok(ns)
}

impl ScanRequest {
    pub fn validate(&self, registry: &[MoleculeParams]) -> Result<()> {
        resolve(registry, &self.molecules)?;
        if self.kind == ScanKind::PnVsN {
            level_sweep(&self.sweep)?;
        } else if self.kind != ScanKind::PotentialVsTime && self.fixed.levels.is_empty() {
            return Err(Error::invalid("levels", "empty level list"));
        }
        if self.kind != ScanKind::PotentialVsTime && self.variants.is_empty() {
            return Err(Error::invalid("variants", "empty variant list"));
        }
        Ok(())
    }

    fn config(&self, molecule: &MoleculeParams, x: f64) -> Result<PotentialConfig> {
        let mut m = molecule.clone();
        if let Some(q) = self.fixed.q {
            m.q = q;
        }
        let mut alpha = self.fixed.alpha;
        match self.kind {
            ScanKind::PnVsQ => m.q = x,
            ScanKind::PnVsAlpha => alpha = x,
            _ => {}
        }
        PotentialConfig::new(m, alpha, self.fixed.beta_variant)
    }

    fn point(&self, molecule: &MoleculeParams, x: f64, units: &UnitSystem) -> Result<Vec<ScanRow>> {
        let config = self.config(molecule, x)?;
        if self.kind == ScanKind::PotentialVsTime {
            return Ok(vec![ScanRow {
                sweep: x,
                molecule: molecule.name.clone(),
                n: None,
                variant: "potential".into(),
                value: Some(evaluate_potential(&config, x)?),
            }]);
        }
        let coeffs = derive_coefficients(&config, units)?;
        let levels = if self.kind == ScanKind::PnVsN {
            vec![x.round() as usize]
        } else {
            self.fixed.levels.clone()
        };
        let mut rows = Vec::with_capacity(levels.len() * self.variants.len());
        for &n in &levels {
            for &v in &self.variants {
                let value = momentum_eigenvalue(&coeffs, n, v)
                    .map_err(|e| context(e, &molecule.name, n, v, x))?
                    .ok();
                rows.push(ScanRow {
                    sweep: x,
                    molecule: molecule.name.clone(),
                    n: Some(n),
                    variant: v.label().into(),
                    value,
                });
            }
        }
        Ok(rows)
    }
}

fn context(e: Error, molecule: &str, n: usize, v: EigenvalueVariant, x: f64) -> Error {
    if e.is_numerical() {
        Error::Numerical(format!("{molecule}, n = {n}, {v}, sweep value {x}: {e}"))
    } else {
        e
    }
}

/// Rows ordered by molecule, level, variant, then sweep value.
pub fn scan_rows(request: &ScanRequest, registry: &[MoleculeParams], units: &UnitSystem) -> Result<Vec<ScanRow>> {
    request.validate(registry)?;
    let molecules = resolve(registry, &request.molecules)?;
    let xs: Vec<f64> = if request.kind == ScanKind::PnVsN {
        level_sweep(&request.sweep)?.into_iter().map(|n| n as f64).collect()
    } else {
        request.sweep.values()
    };
    let jobs: Vec<(usize, usize)> = (0..molecules.len())
        .flat_map(|m| (0..xs.len()).map(move |i| (m, i)))
        .collect();
    let per_point: Vec<Vec<ScanRow>> = jobs
        .par_iter()
        .map(|&(m, i)| request.point(&molecules[m], xs[i], units))
        .collect::<Result<_>>()?;

    let mut keyed: Vec<((usize, usize, usize, usize), ScanRow)> = Vec::new();
    for (&(m, i), rows) in jobs.iter().zip(per_point) {
        for (j, row) in rows.into_iter().enumerate() {
            let (level, variant) = if request.kind == ScanKind::PotentialVsTime || request.kind == ScanKind::PnVsN {
                (0, j)
            } else {
                (j / request.variants.len(), j % request.variants.len())
            };
            keyed.push(((m, level, variant, i), row));
        }
    }
    keyed.sort_by_key(|(k, _)| *k);
    Ok(keyed.into_iter().map(|(_, r)| r).collect())
}

pub fn rows_to_csv(kind: ScanKind, rows: &[ScanRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let sweep = if kind == ScanKind::PnVsN {
            format!("{}", r.sweep as usize)
        } else {
            format_value(r.sweep)
        };
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        let value = r.value.map(format_value).unwrap_or_else(|| EXCLUDED.into());
        out.push_str(&format!("{sweep},{},{n},{},{value}\n", r.molecule, r.variant));
    }
    out
}

pub fn series_name(row: &ScanRow, kind: ScanKind) -> String {
    match (kind, row.n) {
        (ScanKind::PnVsN, _) | (_, None) => format!("{} {}", row.molecule, row.variant),
        (_, Some(n)) => format!("{} n={n} {}", row.molecule, row.variant),
    }
}

pub fn rows_to_chart(kind: ScanKind, rows: &[ScanRow]) -> LineChart {
    let mut series: Vec<Series> = Vec::new();
    for r in rows {
        let name = series_name(r, kind);
        let point = r.value.map(|v| (r.sweep, v));
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(point),
            None => series.push(Series {
                name,
                points: vec![point],
            }),
        }
    }
    let y_label = if kind == ScanKind::PotentialVsTime { "V (eV)" } else { "cP_n (eV)" };
    LineChart {
        title: kind.label().into(),
        x_label: kind.axis().into(),
        y_label: y_label.into(),
        series,
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn run_scan(request: &ScanRequest, registry: &[MoleculeParams], units: &UnitSystem) -> Result<ScanOutput> {
    let rows = scan_rows(request, registry, units)?;
    let csv = rows_to_csv(request.kind, &rows);
    let svg = rows_to_chart(request.kind, &rows).render();
    let csv_path = with_suffix(&request.output, "csv");
    let svg_path = with_suffix(&request.output, "svg");
    write(&csv_path, &csv)?;
    write(&svg_path, &svg)?;
    Ok(ScanOutput {
        rows,
        csv,
        svg,
        csv_path,
        svg_path,
    })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    write(path, contents)
}

#[cfg(test)]
mod tests;
