//! JSON rendering of bound reports. Rationals travel as `"p/q"` strings and
//! keys are emitted in sorted order, so parsing and re-rendering a report
//! reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, DiagonalWitness};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    #[serde(rename = "D")]
    pub homogeneous_dim: usize,
    pub baselines: BaselinesJson,
    pub carnot_verdict: String,
    pub class: usize,
    pub constraints: Vec<ConstraintJson>,
    pub dim: usize,
    pub dual: Vec<String>,
    pub flag_blocks: Vec<usize>,
    pub h_lower: String,
    pub h_upper: String,
    pub k_c: String,
    pub lattice_witness: Vec<WitnessJson>,
    pub name: String,
    pub primal: Vec<String>,
    pub series_dims: Vec<usize>,
    pub theta: Vec<String>,
    pub variables: Vec<String>,
    pub weights: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselinesJson {
    pub kc_bound: String,
    pub residual_girth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintJson {
    pub lhs: Vec<String>,
    pub provenance: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub basis: Vec<Vec<String>>,
    pub covolume: String,
    pub r: String,
    pub subring: bool,
    pub systole: String,
    pub verified: bool,
}

fn strs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

impl From<&DiagonalWitness> for WitnessJson {
    fn from(w: &DiagonalWitness) -> Self {
        WitnessJson {
            basis: w.basis.iter().map(|r| strs(r)).collect(),
            covolume: fmt_q(&w.covolume),
            r: w.r.to_string(),
            subring: w.subring,
            systole: w.systole.to_string(),
            verified: w.passes(),
        }
    }
}

impl From<&BoundReport> for ReportJson {
    fn from(r: &BoundReport) -> Self {
        ReportJson {
            homogeneous_dim: r.homogeneous_dim,
            baselines: BaselinesJson {
                kc_bound: fmt_q(&r.baselines.kc_bound),
                residual_girth: r.baselines.residual_girth,
            },
            carnot_verdict: r.verdict.to_string(),
            class: r.class,
            constraints: r
                .lower
                .system
                .constraints
                .iter()
                .map(|c| ConstraintJson { lhs: strs(&c.lhs), provenance: c.provenance.to_string(), rhs: fmt_q(&c.rhs) })
                .collect(),
            dim: r.dim,
            dual: strs(&r.lower.certificate.dual),
            flag_blocks: r.flag_blocks.clone(),
            h_lower: fmt_q(&r.lower.h),
            h_upper: fmt_q(&r.upper.h),
            k_c: fmt_q(&r.k_c),
            lattice_witness: r.witnesses.iter().map(WitnessJson::from).collect(),
            name: r.name.clone(),
            primal: strs(&r.lower.certificate.primal),
            series_dims: r.series_dims.clone(),
            theta: strs(&r.upper.theta),
            variables: r.lower.system.vars.names(),
            weights: r.weights.clone(),
        }
    }
}

impl ReportJson {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values always serialize")
    }

    pub fn parse(text: &str) -> Result<ReportJson, serde_json::Error> {
        serde_json::from_str(text)
    }
}
