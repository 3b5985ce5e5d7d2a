use super::*;
use crate::potential::{default_registry, load_molecule_registry};

fn request(kind: ScanKind, molecules: &[&str], sweep: Sweep, dir: &Path) -> ScanRequest {
    ScanRequest {
        kind,
        molecules: molecules.iter().map(|s| s.to_string()).collect(),
        sweep,
        fixed: FixedParams::default(),
        variants: EigenvalueVariant::ALL.to_vec(),
        output: dir.join(kind.label()),
    }
}

#[test]
fn two_steps_give_two_rows_per_series() {
    let dir = tempfile::tempdir().unwrap();
    let req = request(ScanKind::PnVsAlpha, &["H2", "CO"], Sweep::new(0.4, 0.6, 2).unwrap(), dir.path());
    let out = run_scan(&req, &default_registry(), &UnitSystem::default()).unwrap();
    assert_eq!(out.rows.len(), 2 * 4 * 3 * 2);
    let lines: Vec<&str> = out.csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + out.rows.len());
    for series in out.rows.chunks(2) {
        assert_eq!(series[0].molecule, series[1].molecule);
        assert_eq!((series[0].n, &series[0].variant), (series[1].n, &series[1].variant));
        assert_eq!((series[0].sweep, series[1].sweep), (0.4, 0.6));
    }
    assert_eq!(std::fs::read_to_string(&out.csv_path).unwrap(), out.csv);
    assert!(out.svg_path.exists());
}

#[test]
fn csv_fields_have_twelve_digits_and_are_finite() {
    assert_eq!(format_value(1.0 / 3.0), "3.33333333333e-1");
    let dir = tempfile::tempdir().unwrap();
    let req = request(ScanKind::PotentialVsTime, &["H2", "LiH", "CO", "N2"], Sweep::new(0.3, 5.0, 20).unwrap(), dir.path());
    let out = run_scan(&req, &default_registry(), &UnitSystem::default()).unwrap();
    for line in out.csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 5);
        assert!(f[0].parse::<f64>().unwrap().is_finite());
        assert!(f[4].parse::<f64>().unwrap().is_finite());
    }
    let h2: Vec<f64> = out.rows.iter().filter(|r| r.molecule == "H2").map(|r| r.value.unwrap()).collect();
    assert!(h2.iter().all(|&v| v >= 0.0));
    // Rising towards the dissociation energy at late times.
    let last = *h2.last().unwrap();
    assert!(last > 0.95 * 4.7446 && last < 4.7446);
}

#[test]
fn level_scan_trends() {
    let dir = tempfile::tempdir().unwrap();
    let req = request(ScanKind::PnVsN, &["H2"], Sweep::new(0.0, 4.0, 5).unwrap(), dir.path());
    let out = run_scan(&req, &default_registry(), &UnitSystem::default()).unwrap();
    let series = |v: EigenvalueVariant| -> Vec<f64> {
        out.rows.iter().filter(|r| r.variant == v.label()).map(|r| r.value.unwrap()).collect()
    };
    let literal = series(EigenvalueVariant::BetaTimesA);
    assert!(literal.windows(2).all(|w| w[1] < w[0]) && literal[0] < 0.0);
    let root = series(EigenvalueVariant::QuantizationRoot);
    assert!(root.windows(2).all(|w| w[1] > w[0]) && root[0] > 0.0);
    assert!(out.csv.lines().nth(1).unwrap().starts_with("0,H2,0,"));
    assert!(Sweep::new(0.0, 1.0, 5).is_ok());
    let bad = request(ScanKind::PnVsN, &["H2"], Sweep::new(0.0, 1.0, 5).unwrap(), dir.path());
    assert!(run_scan(&bad, &default_registry(), &UnitSystem::default()).is_err());
}

#[test]
fn excluded_levels_are_explicit() {
    // ħ = 1 and 1 eV per amu: five bound levels below the left asymptote.
    let reg = load_molecule_registry("syn,100,1.3068528194400546,1,2,1\n").unwrap();
    let units = UnitSystem::new(1.0, 1.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut req = request(ScanKind::PnVsQ, &["syn"], Sweep::new(0.8, 1.2, 3).unwrap(), dir.path());
    req.fixed.levels = (0..8).collect();
    req.variants = vec![EigenvalueVariant::QuantizationRoot];
    let out = run_scan(&req, &reg, &units).unwrap();
    assert_eq!(out.rows.len(), 8 * 3);
    let excluded: Vec<&ScanRow> = out.rows.iter().filter(|r| r.value.is_none()).collect();
    assert!(!excluded.is_empty());
    assert!(excluded.iter().all(|r| r.n.unwrap() >= 4));
    assert_eq!(out.csv.matches(",excluded\n").count(), excluded.len());
    assert!(out.svg.contains("(excluded)"));
}

#[test]
fn svg_lists_every_series() {
    let dir = tempfile::tempdir().unwrap();
    let req = request(ScanKind::PnVsQ, &["LiH", "N2"], Sweep::new(-0.5, -0.2, 4).unwrap(), dir.path());
    let out = run_scan(&req, &default_registry(), &UnitSystem::default()).unwrap();
    assert!(out.svg.starts_with("<?xml"));
    assert!(out.svg.trim_end().ends_with("</svg>"));
    for r in &out.rows {
        let name = svg::escape(&series_name(r, req.kind));
        assert!(out.svg.contains(&format!("data-series=\"{name}\"")), "{name}");
    }
    assert_eq!(out.svg.matches("<g ").count(), 2 * 4 * 3);
}

#[test]
fn identical_requests_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let req = request(ScanKind::PnVsAlpha, &["CO", "H2"], Sweep::new(0.2, 1.5, 7).unwrap(), dir.path());
    let a = run_scan(&req, &default_registry(), &UnitSystem::default()).unwrap();
    let first = std::fs::read(&a.csv_path).unwrap();
    let b = run_scan(&req, &default_registry(), &UnitSystem::default()).unwrap();
    assert_eq!(first, std::fs::read(&b.csv_path).unwrap());
    assert_eq!(a.svg, b.svg);
}

#[test]
fn request_errors() {
    let dir = tempfile::tempdir().unwrap();
    let reg = default_registry();
    let u = UnitSystem::default();
    let req = request(ScanKind::PnVsQ, &["Xe2"], Sweep::new(-0.5, -0.2, 4).unwrap(), dir.path());
    assert!(matches!(run_scan(&req, &reg, &u), Err(Error::UnknownMolecule(_))));
    assert!(Sweep::new(1.0, 0.0, 4).is_err());
    assert!(Sweep::new(0.0, 1.0, 1).is_err());
    let mut req = request(ScanKind::PnVsQ, &["H2"], Sweep::new(-0.5, -0.2, 4).unwrap(), dir.path());
    req.variants.clear();
    assert!(run_scan(&req, &reg, &u).is_err());
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let req = request(ScanKind::PnVsQ, &["H2"], Sweep::new(-0.5, -0.2, 4).unwrap(), &blocker.join("sub"));
    assert!(matches!(run_scan(&req, &reg, &u), Err(Error::Io { .. })));
    assert_eq!("pn-vs-q".parse::<ScanKind>().unwrap(), ScanKind::PnVsQ);
    assert!("fig4".parse::<ScanKind>().is_err());
}

#[test]
fn hydrogen_validation() {
    let request = ValidationRequest {
        molecules: vec!["H2".into()],
        alpha: 0.5,
        levels: vec![0, 1],
        beta_variant: BetaVariant::default(),
        num_points: None,
    };
    let report = run_validation(&request, &default_registry(), &UnitSystem::default()).unwrap();
    assert!(report.self_test.passed && report.self_test.max_rel_deviation < 1e-3);
    assert_eq!(report.rows.len(), 2 * 3);
    for r in report.rows_for(EigenvalueVariant::QuantizationRoot) {
        assert!(r.within_threshold, "{r:?}");
    }
    // Flagged rows are reported, not errors.
    assert!(report.rows_for(EigenvalueVariant::BetaTimesA).all(|r| !r.within_threshold));
    assert!(report.ledger.iter().any(|l| l.starts_with("H2 beta-times-a: 2 of 2")));
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), 1 + 5 + 6);
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 11));
    let text = report.to_text();
    assert!(text.contains("box self-test") && text.contains("FLAG"));
    let dir = tempfile::tempdir().unwrap();
    let (t, c) = report.write(&dir.path().join("validation")).unwrap();
    assert!(t.exists() && c.exists());
}
