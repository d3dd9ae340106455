//! Loading algebras, lattices and run settings; every error here exits 2.

use std::fs;
use std::path::Path;

use nilsys_core::algebra::parse_algebra;
use nilsys_core::bounds::BoundsConfig;
use nilsys_core::catalog::{self, Params};
use nilsys_core::constraints::GenerationOptions;
use nilsys_core::lattice::parse_rows;
use nilsys_core::rational::parse_q;
use nilsys_core::{LieAlgebra, Q};
use num_traits::Signed;

use crate::{Cli, Failure, Source};

pub const MAX_ENUM_VAR: &str = "NILSYS_MAX_ENUM";

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn params(text: Option<&str>) -> Result<Params, Failure> {
    text.map_or(Ok(Params::new()), |t| Params::parse(t).map_err(|e| Failure::Input(e.to_string())))
}

pub fn load(source: &Source) -> Result<LieAlgebra, Failure> {
    match (&source.file, &source.catalog) {
        (Some(path), None) => {
            if source.param.is_some() {
                return Err(Failure::Input("--param only applies to --catalog".into()));
            }
            let a = parse_algebra(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(match a.name() {
                Some(_) => a,
                None => {
                    let stem = path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
                    a.with_name(stem)
                }
            })
        }
        (None, Some(name)) => {
            let p = params(source.param.as_deref())?;
            let label = catalog::label(name, &p).map_err(|e| Failure::Input(e.to_string()))?;
            let a = catalog::build(name, &p).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(a.with_name(label))
        }
        (Some(_), Some(_)) => Err(Failure::Input("give either a file or --catalog, not both".into())),
        (None, None) => Err(Failure::Input("no algebra given: pass a file or --catalog NAME".into())),
    }
}

pub fn lattice_rows(path: &Path, dim: usize) -> Result<Vec<Vec<Q>>, Failure> {
    parse_rows(&read(path)?, dim).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn scale(text: &str) -> Result<Q, Failure> {
    parse_q(text)
        .filter(|r| r.is_positive())
        .ok_or_else(|| Failure::Input(format!("--r expects a positive rational, got `{text}`")))
}

fn node_limit() -> Result<Option<u64>, Failure> {
    match std::env::var(MAX_ENUM_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Input(format!("{MAX_ENUM_VAR} must be a node count, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

pub fn bounds_config(cli: &Cli) -> Result<BoundsConfig, Failure> {
    if let Some(&n) = cli.r_samples.iter().find(|&&n| n < 2) {
        return Err(Failure::Input(format!("--r-samples entries must be at least 2, got {n}")));
    }
    Ok(BoundsConfig {
        flag_mode: cli.flag.into(),
        generation: GenerationOptions::without(cli.disable_constraints.iter().copied()),
        r_samples: cli.r_samples.clone(),
        node_limit: node_limit()?,
    })
}
