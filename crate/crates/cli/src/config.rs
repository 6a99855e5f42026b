use crate::args::{Command, Common, Format};
use crate::spec::{parse_complex, parse_tau_path};
use crate::CliError;
use gafheat::C64;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to reproduce a run; written into every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub seed: u64,
    pub n_max: usize,
    pub trials: usize,
    /// `[re, im]`.
    pub tau: Option<[f64; 2]>,
    /// Path nodes as `[re, im]` pairs.
    pub tau_path: Vec<[f64; 2]>,
    pub output_dir: String,
    pub format: Format,
    pub strict: bool,
    /// Subcommand-specific options.
    pub params: BTreeMap<String, Value>,
    pub version: String,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl ExperimentConfig {
    pub fn from_args(common: &Common, command: &Command) -> Result<Self, CliError> {
        let tau = common.tau.as_deref().map(parse_complex).transpose()?;
        let tau_path = match &common.tau_path {
            Some(p) => parse_tau_path(p)?.into_iter().map(|t| [t, 0.0]).collect(),
            None => Vec::new(),
        };
        let mut params = BTreeMap::new();
        let name = match command {
            Command::Flow { spec, grid, radius } => {
                params.insert("spec".into(), json!(spec));
                params.insert("grid".into(), json!(grid));
                params.insert("radius".into(), json!(radius));
                "flow"
            }
            Command::Trajectories { spec, count, radius } => {
                params.insert("spec".into(), json!(spec));
                params.insert("count".into(), json!(count));
                params.insert("radius".into(), json!(radius));
                "trajectories"
            }
            Command::Residuals { anchors, permutations } => {
                params.insert("anchors".into(), json!(anchors));
                params.insert("permutations".into(), json!(permutations));
                "residuals"
            }
            Command::MetaplecticCheck { pairs } => {
                params.insert("pairs".into(), json!(pairs));
                "metaplectic_check"
            }
            Command::Covariance { sigma, grid, radius, process } => {
                params.insert("sigma".into(), json!(sigma.as_deref().map(parse_complex).transpose()?.map(pair)));
                params.insert("grid".into(), json!(grid));
                params.insert("radius".into(), json!(radius));
                params.insert("process".into(), json!(process));
                "covariance"
            }
        };
        Ok(Self {
            command: name.to_string(),
            seed: common.seed,
            n_max: common.n_max,
            trials: common.trials,
            tau: tau.map(pair),
            tau_path,
            output_dir: common.out.display().to_string(),
            format: common.format,
            strict: common.strict,
            params,
            version: VERSION.to_string(),
        })
    }

    pub fn tau(&self) -> Option<C64> {
        self.tau.map(|[re, im]| C64::new(re, im))
    }
}
