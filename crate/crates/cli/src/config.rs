//! Run configuration.
//!
//! Plain-text form: `key = value` lines, `#` comments, and `[section]`
//! headers. Top-level keys (or a `[verify]` section) hold `seed` and
//! `trials`; each `[process]` section adds a configured Bernoulli process;
//! `[lln]`, `[weak-lln]`, `[poisson]` and `[exp-limit]` parametrize the
//! convergence experiments. A file whose first non-blank character is `{` is
//! read as JSON with the same structure.

use std::fmt;
use std::str::FromStr;

use rieszprob::io::{PartitionRepr, ProcessDescriptor, SpaceRepr};
use rieszprob::scalar::ScalarRepr;
use rieszprob::{Representation, Scalar};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Lln,
    WeakLln,
    Poisson,
    ExpLimit,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [Experiment::Lln, Experiment::WeakLln, Experiment::Poisson, Experiment::ExpLimit];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Lln => "lln",
            Experiment::WeakLln => "weak-lln",
            Experiment::Poisson => "poisson",
            Experiment::ExpLimit => "exp-limit",
        }
    }

    fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            Experiment::Lln => &["p", "eps", "n", "monotone"],
            Experiment::WeakLln => &["p", "n", "monotone"],
            Experiment::Poisson => &["g", "j", "n", "tolerance", "monotone"],
            Experiment::ExpLimit => &["g", "n", "monotone"],
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}` (expected lln, weak-lln, poisson or exp-limit)"))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one convergence experiment, after defaults are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    /// Success probability (lln, weak-lln).
    pub p: f64,
    /// Limit parameter, one coordinate per atom (poisson, exp-limit).
    pub g: Vec<f64>,
    pub eps: Vec<f64>,
    pub n: Vec<usize>,
    pub j: Vec<usize>,
    /// Largest admissible gap at the last grid point (poisson).
    pub tolerance: f64,
    /// Require the lhs (lln, weak-lln) or gap (poisson, exp-limit) to decrease
    /// along the grid; strictly for exp-limit.
    pub monotone: bool,
}

impl ExperimentParams {
    pub fn defaults(experiment: Experiment) -> Self {
        let decades = vec![10, 100, 1_000, 10_000];
        let base =
            Self { p: 0.5, g: vec![1.0], eps: vec![0.1], n: decades, j: vec![], tolerance: 1e-4, monotone: true };
        match experiment {
            Experiment::Lln => Self { monotone: false, ..base },
            Experiment::WeakLln => base,
            Experiment::Poisson => Self { n: vec![100, 1_000, 10_000], j: (0..=5).collect(), ..base },
            Experiment::ExpLimit => Self { n: (1..=10).map(|k| 1 << k).collect(), ..base },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    pub processes: Vec<ProcessDescriptor>,
    pub(crate) experiments: Vec<(Experiment, ExperimentParams)>,
}

impl Default for Config {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS, processes: Vec::new(), experiments: Vec::new() }
    }
}

impl Config {
    pub fn experiment(&self, experiment: Experiment) -> ExperimentParams {
        self.experiments
            .iter()
            .find(|(e, _)| *e == experiment)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| ExperimentParams::defaults(experiment))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            parse_json(text)
        } else {
            parse_ini(text)
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Key/value pairs of one experiment section, shared by both syntaxes.
type Entries = Vec<(String, String)>;

fn build_experiment(experiment: Experiment, entries: &Entries) -> Result<ExperimentParams, String> {
    let mut params = ExperimentParams::defaults(experiment);
    for (key, value) in entries {
        if !experiment.allowed_keys().contains(&key.as_str()) {
            return Err(format!("key `{key}` is not valid for experiment {experiment}"));
        }
        match key.as_str() {
            "p" => params.p = parse_real(value)?,
            "g" => params.g = parse_list(value, parse_real)?,
            "eps" => params.eps = parse_list(value, parse_real)?,
            "n" => params.n = parse_int_list(value)?,
            "j" => params.j = parse_int_list(value)?,
            "tolerance" => params.tolerance = parse_real(value)?,
            "monotone" => params.monotone = parse_bool(value)?,
            _ => unreachable!("filtered by allowed_keys"),
        }
    }
    validate_experiment(experiment, &params)?;
    Ok(params)
}

fn validate_experiment(experiment: Experiment, params: &ExperimentParams) -> Result<(), String> {
    if params.n.is_empty() {
        return Err(format!("{experiment}: empty n grid"));
    }
    if params.n[0] == 0 || params.n.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("{experiment}: n grid must be positive and strictly increasing"));
    }
    let probability = |x: f64| (0.0..=1.0).contains(&x);
    match experiment {
        Experiment::Lln | Experiment::WeakLln => {
            if !probability(params.p) {
                return Err(format!("{experiment}: p = {} is not in [0, 1]", params.p));
            }
            if params.eps.is_empty() || params.eps.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
                return Err(format!("{experiment}: eps must be a nonempty list of positive values"));
            }
        }
        Experiment::Poisson | Experiment::ExpLimit => {
            if params.g.is_empty() || params.g.iter().any(|&g| g < 0.0 || !g.is_finite()) {
                return Err(format!("{experiment}: g must be a nonempty list of nonnegative values"));
            }
        }
    }
    if experiment == Experiment::Poisson {
        let g_max = params.g.iter().cloned().fold(0.0, f64::max);
        if (params.n[0] as f64) < g_max {
            return Err(format!("poisson: n = {} is below e_norm(g) = {g_max}, so g/n leaves [0, 1]", params.n[0]));
        }
        if params.j.is_empty() {
            return Err("poisson: empty j list".into());
        }
        if let Some(&j) = params.j.iter().find(|&&j| j > params.n[0]) {
            return Err(format!("poisson: level j = {j} exceeds n = {}", params.n[0]));
        }
        if params.tolerance.is_nan() || params.tolerance <= 0.0 {
            return Err("poisson: tolerance must be positive".into());
        }
    }
    Ok(())
}

/// Exact rational syntax (`1/3`, `0.125`) or any float literal.
fn parse_real(text: &str) -> Result<f64, String> {
    f64::parse(text).map_err(|_| format!("`{text}` is not a number"))
}

fn parse_bool(text: &str) -> Result<bool, String> {
    match text {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{text}` is not a boolean")),
    }
}

/// `12`, `10^4`, `2^10`.
fn parse_int(text: &str) -> Result<usize, String> {
    let bad = || format!("`{text}` is not a nonnegative integer");
    match text.split_once('^') {
        Some((b, k)) => {
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            b.checked_pow(k).ok_or_else(bad)
        }
        None => text.parse().map_err(|_| bad()),
    }
}

/// Comma-separated items; an item may be an inclusive range `a..=b`.
fn parse_int_list(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in split_list(text) {
        match item.split_once("..=") {
            Some((a, b)) => {
                let (a, b) = (parse_int(a.trim())?, parse_int(b.trim())?);
                if a > b {
                    return Err(format!("empty range `{item}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(parse_int(item)?),
        }
    }
    Ok(out)
}

fn parse_list<T>(text: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    split_list(text).map(item).collect()
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

#[derive(Default)]
struct ProcessSection {
    weights: Option<Vec<String>>,
    blocks: Option<Vec<usize>>,
    f: Option<Vec<String>>,
    n: Option<usize>,
    representation: Option<Representation>,
}

impl ProcessSection {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let texts = |v: &str| split_list(v).map(String::from).collect::<Vec<_>>();
        match key {
            "weights" => self.weights = Some(texts(value)),
            "blocks" => self.blocks = Some(parse_list(value, parse_int)?),
            "f" => self.f = Some(texts(value)),
            "n" => self.n = Some(parse_int(value)?),
            "representation" => {
                self.representation = Some(match value {
                    "full" => Representation::Full,
                    "aggregated" => Representation::Aggregated,
                    _ => return Err(format!("representation must be full or aggregated, got `{value}`")),
                })
            }
            _ => return Err(format!("unknown process key `{key}`")),
        }
        Ok(())
    }

    fn finish(self) -> Result<ProcessDescriptor, String> {
        let f = self.f.ok_or("process section needs `f`")?;
        let n = self.n.ok_or("process section needs `n`")?;
        let weights = self.weights.unwrap_or_else(|| vec!["1".to_string(); f.len()]);
        let blocks = self.blocks.unwrap_or_else(|| vec![0; weights.len()]);
        Ok(ProcessDescriptor {
            space: SpaceRepr {
                atoms: weights.len(),
                weights: weights.into_iter().map(ScalarRepr::Text).collect(),
                labels: None,
            },
            partition: PartitionRepr { block_of: blocks },
            f: f.into_iter().map(ScalarRepr::Text).collect(),
            n,
            representation: self.representation.unwrap_or(Representation::Full),
        })
    }
}

enum Section {
    Top,
    Process(ProcessSection),
    Experiment(Experiment, Entries),
}

fn parse_ini(text: &str) -> Result<Config, CliError> {
    let mut config = Config::default();
    let mut current = Section::Top;
    let mut seen = Vec::new();

    let close = |section: Section, config: &mut Config, line: usize| -> Result<(), CliError> {
        match section {
            Section::Top => {}
            Section::Process(p) => config.processes.push(p.finish().map_err(|e| at(line, e))?),
            Section::Experiment(e, entries) => {
                let params = build_experiment(e, &entries).map_err(|msg| at(line, msg))?;
                config.experiments.push((e, params));
            }
        }
        Ok(())
    };

    let mut section_start = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| at(line_no, "unterminated section header"))?.trim();
            close(std::mem::replace(&mut current, Section::Top), &mut config, section_start)?;
            section_start = line_no;
            current = match name {
                "verify" => Section::Top,
                "process" => Section::Process(ProcessSection::default()),
                other => {
                    let e: Experiment =
                        other.parse().map_err(|_| at(line_no, format!("unknown section `[{other}]`")))?;
                    if seen.contains(&e) {
                        return Err(at(line_no, format!("duplicate section `[{other}]`")));
                    }
                    seen.push(e);
                    Section::Experiment(e, Vec::new())
                }
            };
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| at(line_no, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match &mut current {
            Section::Top => match key {
                "seed" => config.seed = value.parse().map_err(|_| at(line_no, format!("bad seed `{value}`")))?,
                "trials" => config.trials = parse_int(value).map_err(|e| at(line_no, e))?,
                _ => return Err(at(line_no, format!("unknown key `{key}`"))),
            },
            Section::Process(p) => p.set(key, value).map_err(|e| at(line_no, e))?,
            Section::Experiment(_, entries) => entries.push((key.to_string(), value.to_string())),
        }
    }
    close(current, &mut config, section_start)?;
    Ok(config)
}

fn at(line: usize, msg: impl fmt::Display) -> CliError {
    config_err(format!("line {line}: {msg}"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonConfig {
    seed: Option<u64>,
    trials: Option<usize>,
    #[serde(default)]
    processes: Vec<ProcessDescriptor>,
    lln: Option<serde_json::Map<String, serde_json::Value>>,
    #[serde(rename = "weak-lln")]
    weak_lln: Option<serde_json::Map<String, serde_json::Value>>,
    poisson: Option<serde_json::Map<String, serde_json::Value>>,
    #[serde(rename = "exp-limit")]
    exp_limit: Option<serde_json::Map<String, serde_json::Value>>,
}

/// JSON values are rendered back to the text syntax so both forms share one
/// validator: arrays become comma lists, strings and numbers stay as written.
fn json_text(value: &serde_json::Value) -> Result<String, String> {
    use serde_json::Value;
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Array(items) => Ok(items.iter().map(json_text).collect::<Result<Vec<_>, _>>()?.join(",")),
        _ => Err(format!("unsupported value `{value}`")),
    }
}

fn parse_json(text: &str) -> Result<Config, CliError> {
    let raw: JsonConfig = serde_json::from_str(text).map_err(|e| config_err(format!("invalid JSON config: {e}")))?;
    let mut config = Config {
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
        trials: raw.trials.unwrap_or(DEFAULT_TRIALS),
        processes: raw.processes,
        experiments: Vec::new(),
    };
    let sections = [
        (Experiment::Lln, raw.lln),
        (Experiment::WeakLln, raw.weak_lln),
        (Experiment::Poisson, raw.poisson),
        (Experiment::ExpLimit, raw.exp_limit),
    ];
    for (experiment, map) in sections {
        let Some(map) = map else { continue };
        let entries = map
            .iter()
            .map(|(k, v)| json_text(v).map(|t| (k.clone(), t)))
            .collect::<Result<Entries, _>>()
            .map_err(|e| config_err(format!("{experiment}: {e}")))?;
        let params = build_experiment(experiment, &entries).map_err(config_err)?;
        config.experiments.push((experiment, params));
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let c = Config::parse("# nothing\n\n").unwrap();
        assert_eq!((c.seed, c.trials), (DEFAULT_SEED, DEFAULT_TRIALS));
        assert!(c.processes.is_empty());
        assert_eq!(c.experiment(Experiment::Poisson).j, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(c.experiment(Experiment::ExpLimit).n.last(), Some(&1024));
    }

    #[test]
    fn ini_sections() {
        let text = "seed = 7\ntrials = 20\n\n[process]\nweights = 1, 2\nblocks = 0, 1\nf = 1/3, 2/3\nn = 6\n\n\
                    [process]\nf = 1/2\nn = 10^2\nrepresentation = aggregated\n\n\
                    [lln]\np = 1/3\neps = 1/10, 1/4\nn = 10, 10^2, 10^3\n[poisson]\nj = 0..=3\ng = 2\n";
        let c = Config::parse(text).unwrap();
        assert_eq!((c.seed, c.trials), (7, 20));
        assert_eq!(c.processes.len(), 2);
        assert_eq!(c.processes[0].partition.block_of, vec![0, 1]);
        assert_eq!(c.processes[1].n, 100);
        assert_eq!(c.processes[1].representation, Representation::Aggregated);
        let lln = c.experiment(Experiment::Lln);
        assert_eq!(lln.eps, vec![0.1, 0.25]);
        assert_eq!(lln.n, vec![10, 100, 1000]);
        assert!((lln.p - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.experiment(Experiment::Poisson).j, vec![0, 1, 2, 3]);
        assert_eq!(c.experiment(Experiment::Poisson).g, vec![2.0]);
    }

    #[test]
    fn json_matches_ini() {
        let ini = Config::parse("seed = 3\n[exp-limit]\ng = 0.5, 1\nn = 2, 4, 8\n").unwrap();
        let json = Config::parse(r#"{"seed": 3, "exp-limit": {"g": [0.5, 1], "n": [2, 4, 8]}}"#).unwrap();
        assert_eq!(ini.seed, json.seed);
        assert_eq!(ini.experiment(Experiment::ExpLimit), json.experiment(Experiment::ExpLimit));
    }

    #[test]
    fn json_process_descriptor() {
        let text = r#"{"processes": [{"space": {"atoms": 1, "weights": [1]}, "partition": {"block_of": [0]},
                       "f": ["1/2"], "n": 3, "representation": "full"}]}"#;
        let c = Config::parse(text).unwrap();
        assert_eq!(c.processes[0].n, 3);
    }

    #[test]
    fn malformed_configs_are_rejected() {
        for text in [
            "seed = x",
            "bogus = 1",
            "[nowhere]",
            "[process]\nn = 3",
            "[process]\nf = 1/2\nn = 3\nrepresentation = sparse",
            "[lln]\ng = 1",
            "[lln]\nn = 10, 5",
            "[lln]\np = 3/2",
            "[poisson]\nn = 1, 10\ng = 2",
            "[exp-limit]\n[exp-limit]",
            "just a line",
            "{\"seed\": 1, \"extra\": 2}",
            "{not json",
        ] {
            assert!(matches!(Config::parse(text), Err(CliError::Config(_))), "{text:?}");
        }
    }

    #[test]
    fn error_names_the_line() {
        let Err(CliError::Config(msg)) = Config::parse("seed = 1\n\ntrials = many") else { panic!() };
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("2^1..=2^3, 100").unwrap(), vec![2, 3, 4, 5, 6, 7, 8, 100]);
        assert!(parse_int_list("5..=1").is_err());
        assert!(parse_int("-1").is_err());
    }
}
