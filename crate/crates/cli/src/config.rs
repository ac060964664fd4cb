//! Run configuration: flat `key=value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use sha2::{Digest, Sha256};

use hfree_core::extension::default_v_constant;
use hfree_core::trajectory::{Constants, TrajectoryParams};
use hfree_core::{ForbiddenGraph, GraphSpec};

use crate::CliError;

/// Flags shared by every subcommand that runs the process.
#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Config file of `key=value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Forbidden graph: preset name (K3, C5, K3,3, ...) or graph file path.
    #[arg(long = "h")]
    pub h: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// One or more seeds, comma separated or repeated.
    #[arg(long = "seed", alias = "seeds", value_delimiter = ',', num_args = 1..)]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "W")]
    pub w: Option<f64>,
    #[arg(long = "V")]
    pub v: Option<f64>,
    /// Stop after this many steps (default: m = round(t_max s)).
    #[arg(long, conflicts_with = "to_termination")]
    pub steps: Option<u64>,
    /// Run until no open pair remains.
    #[arg(long)]
    pub to_termination: bool,
    /// Checkpoint times t, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub checkpoints: Vec<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write every pair closed at each step.
    #[arg(long)]
    pub log_closures: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopRule {
    MaxSteps(u64),
    UntilTermination,
    DefaultM,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub h_spec: String,
    pub h: ForbiddenGraph,
    pub n: usize,
    pub seeds: Vec<u64>,
    pub constants: Constants,
    pub stop: StopRule,
    /// Explicit checkpoint times; empty means the subcommand's default grid.
    pub checkpoints: Vec<f64>,
    pub out: PathBuf,
    pub log_closures: bool,
    /// Subcommand-specific settings, recorded in the hash and headers.
    pub extra: BTreeMap<String, String>,
}

pub fn read_kv_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_kv(&text)
}

pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key=value", k + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Loads `H` from a preset name or a graph file.
pub fn load_graph(spec: &str) -> Result<GraphSpec, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return GraphSpec::parse_text(&text).map_err(|e| CliError::Invalid(format!("{spec}: {e}")));
    }
    GraphSpec::preset(spec).map_err(|e| CliError::Invalid(e.to_string()))
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Invalid(format!("config key {key}: cannot parse {v:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Invalid(format!("config key {key}: expected true/false, got {v:?}"))),
    }
}

const RUN_KEYS: &[&str] = &[
    "h",
    "n",
    "seeds",
    "seed",
    "mu",
    "epsilon",
    "W",
    "V",
    "steps",
    "to_termination",
    "checkpoints",
    "out",
    "log_closures",
];

impl RunArgs {
    /// Merges the config file (if any) under the flags and validates `H`.
    /// Keys in `extra_keys` are passed through to [`RunConfig::extra`].
    pub fn resolve(&self, extra_keys: &[&str], default_out: &str) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => read_kv_file(p)?,
            None => BTreeMap::new(),
        };
        for key in file.keys() {
            if !RUN_KEYS.contains(&key.as_str()) && !extra_keys.contains(&key.as_str()) {
                return Err(CliError::Invalid(format!("unknown config key {key:?}")));
            }
        }
        let get = |k: &str| file.get(k).map(String::as_str);

        let h_spec = self
            .h
            .clone()
            .or_else(|| get("h").map(String::from))
            .ok_or_else(|| CliError::Invalid("missing --h".into()))?;
        let h = ForbiddenGraph::new(load_graph(&h_spec)?).map_err(|e| CliError::Invalid(e.to_string()))?;
        let n = match (self.n, get("n")) {
            (Some(n), _) => n,
            (None, Some(v)) => parse_num("n", v)?,
            (None, None) => return Err(CliError::Invalid("missing --n".into())),
        };
        if n < h.vertex_count() {
            return Err(CliError::Invalid(format!(
                "n = {n} is smaller than v_H = {}",
                h.vertex_count()
            )));
        }
        let seeds = if !self.seeds.is_empty() {
            self.seeds.clone()
        } else if let Some(v) = get("seeds").or_else(|| get("seed")) {
            parse_list("seeds", v)?
        } else {
            vec![0]
        };
        let float = |flag: Option<f64>, key: &str, default: f64| -> Result<f64, CliError> {
            let x = match (flag, get(key)) {
                (Some(x), _) => x,
                (None, Some(v)) => parse_num(key, v)?,
                (None, None) => default,
            };
            if !(x.is_finite() && x > 0.0) {
                return Err(CliError::Invalid(format!("{key} must be positive, got {x}")));
            }
            Ok(x)
        };
        let constants = Constants {
            mu: float(self.mu, "mu", Constants::DEFAULT_MU)?,
            epsilon: float(self.epsilon, "epsilon", Constants::DEFAULT_EPSILON)?,
            w: float(self.w, "W", Constants::DEFAULT_W)?,
            v: float(self.v, "V", default_v_constant(&h))?,
        };
        let to_term = self.to_termination || get("to_termination").map(|v| parse_bool("to_termination", v)).transpose()?.unwrap_or(false);
        let stop = match (self.steps, to_term) {
            (Some(k), false) => StopRule::MaxSteps(k),
            (None, true) => StopRule::UntilTermination,
            (Some(_), true) => return Err(CliError::Invalid("--steps and --to-termination conflict".into())),
            (None, false) => match get("steps") {
                Some(v) => StopRule::MaxSteps(parse_num("steps", v)?),
                None => StopRule::DefaultM,
            },
        };
        let checkpoints = if !self.checkpoints.is_empty() {
            self.checkpoints.clone()
        } else if let Some(v) = get("checkpoints") {
            parse_list("checkpoints", v)?
        } else {
            Vec::new()
        };
        if checkpoints.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(CliError::Invalid("checkpoint times must be finite and non-negative".into()));
        }
        let out = self
            .out
            .clone()
            .or_else(|| get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(default_out));
        let log_closures = self.log_closures || get("log_closures").map(|v| parse_bool("log_closures", v)).transpose()?.unwrap_or(false);
        let extra = extra_keys
            .iter()
            .filter_map(|&k| file.get(k).map(|v| (k.to_string(), v.clone())))
            .collect();
        Ok(RunConfig {
            h_spec,
            h,
            n,
            seeds,
            constants,
            stop,
            checkpoints,
            out,
            log_closures,
            extra,
        })
    }
}

impl RunConfig {
    pub fn params(&self) -> TrajectoryParams {
        TrajectoryParams::new(&self.h, self.n, self.constants)
    }

    pub fn stop_steps(&self) -> Option<u64> {
        match self.stop {
            StopRule::MaxSteps(k) => Some(k),
            StopRule::DefaultM => Some(self.params().m),
            StopRule::UntilTermination => None,
        }
    }

    pub fn stop_label(&self) -> String {
        match self.stop {
            StopRule::MaxSteps(k) => format!("max_steps:{k}"),
            StopRule::UntilTermination => "until_termination".into(),
            StopRule::DefaultM => format!("default_m:{}", self.params().m),
        }
    }

    /// Canonical `key=value` rendering with every default filled in. The
    /// output directory is left out so relocating a run keeps its hash.
    pub fn canonical(&self, command: &str) -> String {
        let c = &self.constants;
        let mut s = String::new();
        let _ = writeln!(s, "command={command}");
        let _ = writeln!(s, "h={}", self.h_spec);
        let _ = writeln!(s, "h_graph={}", self.h.graph());
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "seeds={}", join(&self.seeds));
        let _ = writeln!(s, "mu={:?}", c.mu);
        let _ = writeln!(s, "epsilon={:?}", c.epsilon);
        let _ = writeln!(s, "W={:?}", c.w);
        let _ = writeln!(s, "V={:?}", c.v);
        let _ = writeln!(s, "stop={}", self.stop_label());
        let _ = writeln!(s, "checkpoints={}", join(&self.checkpoints));
        let _ = writeln!(s, "log_closures={}", self.log_closures);
        for (k, v) in &self.extra {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn hash(&self, command: &str) -> String {
        let digest = Sha256::digest(self.canonical(command).as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// `#`-prefixed header block for a per-seed output file.
    pub fn header(&self, command: &str, seed: u64) -> String {
        let c = &self.constants;
        let p = self.params();
        let mut s = String::new();
        let _ = writeln!(s, "# hfree {} {command}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# config_sha256={}", self.hash(command));
        let _ = writeln!(s, "# seed={seed}");
        let _ = writeln!(s, "# h={} n={}", self.h_spec, self.n);
        let _ = writeln!(s, "# mu={:?} epsilon={:?} W={:?} V={:?}", c.mu, c.epsilon, c.w, c.v);
        let _ = writeln!(s, "# rho={} p={:?} s={:?} t_max={:?} m={}", self.h.rho(), p.p(), p.s, p.t_max, p.m);
        let _ = writeln!(s, "# stop={}", self.stop_label());
        for (k, v) in &self.extra {
            let _ = writeln!(s, "# {k}={v}");
        }
        s
    }

    pub fn ensure_out_dir(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| CliError::io(&self.out, e))
    }

    pub fn write_file(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

pub fn join<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_comments_and_errors() {
        let m = parse_kv("# top\nh = K3  # trailing\n\nn=100\n").unwrap();
        assert_eq!(m["h"], "K3");
        assert_eq!(m["n"], "100");
        assert!(matches!(parse_kv("h K3"), Err(CliError::Invalid(_))));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "h=K3\nn=50\nseeds=4,5\nmu=0.2\n").unwrap();
        let args = RunArgs {
            config: Some(path),
            n: Some(60),
            ..RunArgs::default()
        };
        let cfg = args.resolve(&[], "out").unwrap();
        assert_eq!(cfg.n, 60);
        assert_eq!(cfg.seeds, vec![4, 5]);
        assert_eq!(cfg.constants.mu, 0.2);
        assert_eq!(cfg.constants.epsilon, Constants::DEFAULT_EPSILON);
        assert_eq!(cfg.stop, StopRule::DefaultM);
    }

    #[test]
    fn hash_tracks_settings() {
        let base = RunArgs {
            h: Some("K3".into()),
            n: Some(40),
            ..RunArgs::default()
        };
        let a = base.resolve(&[], "out").unwrap();
        let b = RunArgs { out: Some("elsewhere".into()), ..base.clone() }.resolve(&[], "out").unwrap();
        let c = RunArgs { mu: Some(0.3), ..base }.resolve(&[], "out").unwrap();
        assert_eq!(a.hash("run"), b.hash("run"));
        assert_ne!(a.hash("run"), c.hash("run"));
        assert_ne!(a.hash("run"), a.hash("track"));
    }

    #[test]
    fn rejects_unbalanced_h() {
        let args = RunArgs {
            h: Some("P4".into()),
            n: Some(10),
            ..RunArgs::default()
        };
        let err = args.resolve(&[], "out").unwrap_err();
        assert!(err.to_string().contains("strictly 2-balanced"), "{err}");
    }
}
