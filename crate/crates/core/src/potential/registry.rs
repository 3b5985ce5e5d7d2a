//! Molecule registry: one molecule per line, `name,De,te,mu,t0,q`,
//! `#` starts a comment.

use super::MoleculeParams;
use crate::error::{Error, Result};

pub const DEFAULT_REGISTRY: &str = "\
# name, De (eV), te (ns), mu (a.m.u.), t0 (ns), q
CO,10.84514471,1.1283,6.860586000,1.128300118,-0.6544806294
N2,9.9051,1.0970,7.0034,1.097000113,-0.3543700921
H2,4.7446,0.7416,0.5039,0.7416001485,-0.3236073943
LiH,2.5155,1.5955,0.8801,1.595500403,-0.3326882575
";

pub fn load_molecule_registry(source: &str) -> Result<Vec<MoleculeParams>> {
    let mut out = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |reason: String| Error::RegistryParse {
            line: idx + 1,
            row: line.to_string(),
            reason,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(parse_err(format!("expected 6 fields, found {}", fields.len())));
        }
        if fields[0].is_empty() {
            return Err(parse_err("empty molecule name".into()));
        }
        let mut vals = [0.0f64; 5];
        for (slot, (label, text)) in vals
            .iter_mut()
            .zip(["De", "te", "mu", "t0", "q"].iter().zip(&fields[1..]))
        {
            *slot = text
                .parse()
                .map_err(|_| parse_err(format!("{label}: cannot parse `{text}`")))?;
        }
        let [de, te, mu, t0, q] = vals;
        out.push(MoleculeParams::new(fields[0], de, te, mu, t0, q)?);
    }
    Ok(out)
}

pub fn default_registry() -> Vec<MoleculeParams> {
    load_molecule_registry(DEFAULT_REGISTRY).expect("embedded registry is valid")
}

pub fn find_molecule<'a>(registry: &'a [MoleculeParams], name: &str) -> Result<&'a MoleculeParams> {
    registry
        .iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownMolecule(name.to_string()))
}
