//! Report documents printed to stdout.
//!
//! One JSON object per invocation, with a fixed field order pinned by the
//! struct definitions. Every field is a deterministic function of the
//! inputs except `timing_ms`, which is kept last so consumers comparing
//! reports byte for byte can strip that single line.

use serde::Serialize;
use sha2::{Digest, Sha256};

use pickwell::kernel::CMatrix;

pub const REPORT_VERSION: &str = "pickwell-1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct Report {
    pub version: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pick: Option<PickSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domination: Option<DominationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<InterpolationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifySection>,
    pub exit_code: i32,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            version: REPORT_VERSION,
            tool_version: TOOL_VERSION,
            command,
            mode: None,
            instance_digest: None,
            function_digest: None,
            pick: None,
            domination: None,
            interpolation: None,
            evaluation: None,
            generation: None,
            verification: None,
            exit_code: 0,
            timing_ms: 0,
        }
    }

    pub fn print(&self) {
        match serde_json::to_string_pretty(self) {
            Ok(text) => println!("{text}"),
            Err(err) => eprintln!("error: cannot render report: {err}"),
        }
    }
}

#[derive(Serialize)]
pub struct PickSection {
    pub min_eigenvalue: f64,
    pub verdict: &'static str,
    pub feasible: bool,
}

#[derive(Serialize)]
pub struct DominationSection {
    pub status: &'static str,
    pub spectral_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choi_min_eigenvalue: Option<f64>,
    pub samples_run: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_sample_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
}

#[derive(Serialize)]
pub struct WitnessSection {
    pub kind: &'static str,
    pub margin: f64,
    pub verified_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Serialize)]
pub struct InterpolationSection {
    pub method: &'static str,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infeasible_step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infeasible_modulus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_sup_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Mirror of the function document, embedded so the report alone carries
/// the interpolant.
#[derive(Serialize)]
pub struct FunctionBody {
    pub version: &'static str,
    pub parameters: Vec<[f64; 2]>,
    pub anchors: Vec<[f64; 2]>,
    pub terminal: [f64; 2],
    pub numerator: Vec<[f64; 2]>,
    pub denominator: Vec<[f64; 2]>,
}

impl FunctionBody {
    pub fn from_schur(f: &pickwell::SchurFn) -> Self {
        let pairs = |zs: &[num_complex::Complex64]| zs.iter().map(|z| [z.re, z.im]).collect();
        FunctionBody {
            version: REPORT_VERSION,
            parameters: pairs(f.parameters()),
            anchors: pairs(f.anchors()),
            terminal: [f.terminal().re, f.terminal().im],
            numerator: pairs(f.rational().numerator()),
            denominator: pairs(f.rational().denominator()),
        }
    }
}

#[derive(Serialize)]
pub struct EvalSection {
    pub rows: usize,
    pub cols: usize,
    pub value: Vec<Vec<[f64; 2]>>,
    pub norm: f64,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct GenSection {
    pub mode: &'static str,
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub note: String,
}

#[derive(Serialize)]
pub struct VerifySection {
    pub max_residual: f64,
    pub residual_tol: f64,
    pub residuals_pass: bool,
    pub feasibility: &'static str,
    pub agreement: &'static str,
}

pub fn digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let bytes = hasher.finalize();
    let mut hex = String::with_capacity(7 + bytes.len() * 2);
    hex.push_str("sha256:");
    for b in bytes {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

pub fn matrix_rows(a: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect())
        .collect()
}
