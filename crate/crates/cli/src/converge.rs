//! Convergence experiments behind `converge`, evaluated on the aggregated
//! `f64` path.
//!
//! `lln` and `weak-lln` use a scalar success probability `p`. `poisson` and
//! `exp-limit` take `g` with one coordinate per atom (identity conditional
//! expectation), and report `e_norm` of the vector quantities.

use rieszprob::scalar::FLOAT_LE_TOLERANCE;
use rieszprob::{poisson_limit, poisson_scheme, BernoulliProcess, CondExp, Element, Representation, Space};

use crate::config::{Experiment, ExperimentParams};
use crate::CliError;

/// Slack for the weak-LLN envelope comparison.
pub const ENVELOPE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub experiment: Experiment,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    /// One line per violated assertion; empty iff the experiment passed.
    pub failures: Vec<String>,
    /// Informational notes (not failures).
    pub notes: Vec<String>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn real(x: f64) -> String {
    format!("{x:e}")
}

fn core(e: rieszprob::Error) -> CliError {
    CliError::Config(e.to_string())
}

type Base = (Space<f64>, CondExp<f64>, Element<f64>);

fn single_atom(p: f64) -> Result<Base, CliError> {
    let base = Space::uniform(1).map_err(core)?;
    let t = CondExp::expectation(&base);
    let f = base.constant(p);
    Ok((base, t, f))
}

fn vector(g: &[f64]) -> Result<Base, CliError> {
    let base = Space::uniform(g.len()).map_err(core)?;
    let t = CondExp::identity(&base);
    let g = base.element(g.to_vec()).map_err(core)?;
    Ok((base, t, g))
}

/// Flags consecutive pairs that fail to decrease (strictly or not).
fn check_decreasing(label: &str, points: &[(usize, f64)], strict: bool, failures: &mut Vec<String>) {
    for w in points.windows(2) {
        let ((n0, a), (n1, b)) = (w[0], w[1]);
        let bad = if strict { b >= a } else { b > a + FLOAT_LE_TOLERANCE };
        if bad {
            let relation = if strict { "not strictly below" } else { "above" };
            failures.push(format!("{label}: value {b:e} at n = {n1} is {relation} {a:e} at n = {n0}"));
        }
    }
}

pub fn run(experiment: Experiment, params: &ExperimentParams) -> Result<Table, CliError> {
    match experiment {
        Experiment::Lln => lln(params),
        Experiment::WeakLln => weak_lln(params),
        Experiment::Poisson => poisson(params),
        Experiment::ExpLimit => exp_limit(params),
    }
}

fn lln(params: &ExperimentParams) -> Result<Table, CliError> {
    let (base, t, f) = single_atom(params.p)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &eps in &params.eps {
        let mut points = Vec::new();
        for &n in &params.n {
            let process = BernoulliProcess::new(&base, &t, &f, n, Representation::Aggregated).map_err(core)?;
            let check = process.lln_deviation(&eps).map_err(core)?;
            let (lhs, bound) = (*check.lhs.coord(0), *check.rhs.coord(0));
            if !check.holds {
                failures.push(format!("n = {n}, eps = {eps}: lhs {lhs:e} exceeds bound {bound:e}"));
            }
            rows.push(vec![n.to_string(), real(eps), real(lhs), real(bound), real(bound - lhs)]);
            points.push((n, lhs));
        }
        if params.monotone {
            check_decreasing(&format!("eps = {eps}"), &points, false, &mut failures);
        }
    }
    Ok(Table {
        experiment: Experiment::Lln,
        header: &["n", "eps", "lhs", "bound", "gap"],
        rows,
        failures,
        notes: vec![],
    })
}

fn weak_lln(params: &ExperimentParams) -> Result<Table, CliError> {
    let (base, t, f) = single_atom(params.p)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut points = Vec::new();
    for &n in &params.n {
        let process = BernoulliProcess::new(&base, &t, &f, n, Representation::Aggregated).map_err(core)?;
        let lhs = *process.weak_lln_term().map_err(core)?.coord(0);
        let bound = (params.p * (1.0 - params.p) / n as f64).sqrt();
        if lhs > bound + ENVELOPE_TOLERANCE {
            failures.push(format!("n = {n}: lhs {lhs:e} exceeds sqrt(p(1-p)/n) = {bound:e}"));
        }
        rows.push(vec![n.to_string(), real(lhs), real(bound), real(bound - lhs)]);
        points.push((n, lhs));
    }
    if params.monotone {
        check_decreasing("weak-lln", &points, false, &mut failures);
    }
    Ok(Table { experiment: Experiment::WeakLln, header: &["n", "lhs", "bound", "gap"], rows, failures, notes: vec![] })
}

fn poisson(params: &ExperimentParams) -> Result<Table, CliError> {
    let (base, t, g) = vector(&params.g)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let last = *params.n.last().expect("validated nonempty");
    for &j in &params.j {
        let limit = poisson_limit(&g, j).map_err(core)?;
        let mut points = Vec::new();
        for &n in &params.n {
            let lhs = poisson_scheme(&base, &t, &g, n, j).map_err(core)?;
            let gap = lhs.sub(&limit).map_err(core)?.e_norm();
            rows.push(vec![n.to_string(), j.to_string(), real(lhs.e_norm()), real(limit.e_norm()), real(gap)]);
            points.push((n, gap));
            if n == last && gap >= params.tolerance {
                failures.push(format!("n = {n}, j = {j}: gap {gap:e} is not below tolerance {:e}", params.tolerance));
            }
        }
        if params.monotone {
            check_decreasing(&format!("j = {j}"), &points, false, &mut failures);
        }
    }
    Ok(Table {
        experiment: Experiment::Poisson,
        header: &["n", "j", "lhs", "limit", "gap"],
        rows,
        failures,
        notes: vec![],
    })
}

fn exp_limit(params: &ExperimentParams) -> Result<Table, CliError> {
    let (_, _, g) = vector(&params.g)?;
    let limit = g.exp_neg();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    if g.e_norm() > 1.0 {
        notes.push(format!("e_norm(g) = {} exceeds 1: outside [-1, 1], evaluated componentwise", g.e_norm()));
    }
    let mut points = Vec::new();
    for &n in &params.n {
        let lhs = g.exp_neg_limit(n).map_err(core)?;
        let gap = lhs.sub(&limit).map_err(core)?.e_norm();
        rows.push(vec![n.to_string(), real(lhs.e_norm()), real(limit.e_norm()), real(gap)]);
        points.push((n, gap));
    }
    if params.monotone {
        check_decreasing("exp-limit gap", &points, true, &mut failures);
    }
    Ok(Table { experiment: Experiment::ExpLimit, header: &["n", "lhs", "limit", "gap"], rows, failures, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults(e: Experiment) -> Table {
        run(e, &ExperimentParams::defaults(e)).unwrap()
    }

    #[test]
    fn default_experiments_pass() {
        for e in Experiment::ALL {
            let table = defaults(e);
            assert!(table.passed(), "{e}: {:?}", table.failures);
        }
    }

    #[test]
    fn lln_rows_stay_below_bound() {
        let table = defaults(Experiment::Lln);
        assert_eq!(table.rows.len(), 4);
        for row in &table.rows {
            let (lhs, bound): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
            assert!(lhs <= bound);
        }
        assert!(table.to_csv().starts_with("n,eps,lhs,bound,gap\n10,1e-1,"));
    }

    #[test]
    fn poisson_gap_below_tolerance_at_largest_n() {
        let table = defaults(Experiment::Poisson);
        for row in table.rows.iter().filter(|r| r[0] == "10000") {
            assert!(row[4].parse::<f64>().unwrap() < 1e-4);
        }
    }

    #[test]
    fn exp_limit_flags_large_g() {
        let params = ExperimentParams { g: vec![0.5, 2.0], ..ExperimentParams::defaults(Experiment::ExpLimit) };
        let table = run(Experiment::ExpLimit, &params).unwrap();
        assert_eq!(table.notes.len(), 1);
        assert!(table.passed());
    }

    #[test]
    fn constant_gap_violates_strict_decrease() {
        let params = ExperimentParams { g: vec![0.0], ..ExperimentParams::defaults(Experiment::ExpLimit) };
        let table = run(Experiment::ExpLimit, &params).unwrap();
        assert!(!table.passed());
    }

    #[test]
    fn tight_tolerance_fails() {
        let params = ExperimentParams { tolerance: 1e-12, ..ExperimentParams::defaults(Experiment::Poisson) };
        let table = run(Experiment::Poisson, &params).unwrap();
        assert_eq!(table.failures.len(), 6);
    }
}
