//! The exact-identity suite behind `verify`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rieszprob::io::ProcessDescriptor;
use rieszprob::random;
use rieszprob::{
    bienayme, cross_term, extend_with_independent_events, pairwise_product_rule, tchebichev, BernoulliProcess, CondExp,
    Evidence, Rational, Representation, Scalar, Space,
};
use serde::Serialize;

use crate::config::Config;
use crate::CliError;

/// Largest `n` for randomized full-representation instances.
const RANDOM_FULL_N: usize = 8;
/// Largest `n` for the exhaustive `Q_j` check.
const RANDOM_QJ_N: usize = 6;
/// Largest `n` at which configured processes are cross-checked against the
/// other representation.
const AGREEMENT_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub statement: String,
    pub instances: usize,
    pub failures: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

type Outcome = Result<bool, String>;

fn ok(holds: bool) -> Outcome {
    Ok(holds)
}

fn err(e: rieszprob::Error) -> String {
    e.to_string()
}

fn summarize(name: &str, statement: &str, outcomes: impl IntoIterator<Item = Outcome>) -> CheckSummary {
    let mut instances = 0;
    let mut failures = 0;
    let mut first_failure = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        instances += 1;
        let failure = match outcome {
            Ok(true) => None,
            Ok(false) => Some(format!("instance {i}: does not hold")),
            Err(e) => Some(format!("instance {i}: {e}")),
        };
        if let Some(msg) = failure {
            failures += 1;
            first_failure.get_or_insert(msg);
        }
    }
    CheckSummary {
        name: name.to_string(),
        statement: statement.to_string(),
        instances,
        failures,
        passed: failures == 0 && instances > 0,
        first_failure,
    }
}

/// One randomized family: `trials` instances drawn from stream `stream` of
/// the seed, so each family is independent of the others' draw counts.
struct Family {
    name: &'static str,
    statement: &'static str,
    instance: fn(&mut ChaCha8Rng, usize) -> Outcome,
}

const FAMILIES: &[Family] = &[
    Family { name: "averaging", statement: "T(fg) = g·Tf for g in R(T)", instance: averaging },
    Family { name: "conditional_jensen", statement: "(S|f|)² ≤ S(f²)", instance: jensen },
    Family {
        name: "tchebichev", statement: "TP_{(f-εe)^+}e ≤ ε⁻²Tf² for f ≥ 0", instance: tchebichev_instance
    },
    Family {
        name: "radon_nikodym",
        statement: "TPf = TPT_F f for every band P generated by F",
        instance: radon_nikodym,
    },
    Family {
        name: "product_rule",
        statement: "T(fg) = Tf·Tg and T[(f-Tf)(g-Tg)] = 0 for independent f, g",
        instance: product_rule,
    },
    Family {
        name: "bienayme",
        statement: "var(Σf_k) = Σvar(f_k) for independent families",
        instance: bienayme_instance,
    },
    Family { name: "bernoulli_mean", statement: "T'P_k e = f and TS_n = nf", instance: bernoulli_mean },
    Family {
        name: "payoff_distribution",
        statement: "TP_{S_n=je}e = C(n,j) f^j (e-f)^{n-j} for all j, summing to e",
        instance: payoff_distribution,
    },
    Family { name: "process_variance", statement: "var(S_n) = nf(e-f)", instance: process_variance },
    Family { name: "q_j", statement: "Q_j = P_{S_n=je}, pairwise disjoint, ΣQ_j = I, Q_jS_n = jQ_je", instance: q_j },
    Family { name: "lln_bound", statement: "TP_{(|S_n/n-f|-εe)^+}e ≤ f(e-f)/(nε²)", instance: lln_bound },
    Family {
        name: "representation_agreement",
        statement: "full and aggregated S_n statistics coincide",
        instance: representation_agreement,
    },
];

fn averaging(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let t = random::cond_exp(rng, 8, 4);
    let f = random::element(rng, t.space());
    let g = random::block_constant(rng, &t);
    ok(t.check_averaging(&f, &g).map_err(err)?.holds)
}

fn jensen(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let s = random::cond_exp(rng, 8, 4);
    let f = random::element(rng, s.space());
    ok(s.conditional_jensen(&f).map_err(err)?.holds)
}

fn tchebichev_instance(rng: &mut ChaCha8Rng, i: usize) -> Outcome {
    let t = random::cond_exp(rng, 8, 4);
    let f = random::nonnegative_element(rng, t.space());
    let eps =
        [Rational::ratio(1, 4), Rational::ratio(1, 2), Rational::from_i64(1), Rational::from_i64(2)][i % 4].clone();
    ok(tchebichev(&t, &f, &eps).map_err(err)?.holds)
}

fn radon_nikodym(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let t = random::cond_exp(rng, 8, 3);
    let sub = random::refinement(rng, t.partition(), 3);
    let t_f = t.radon_nikodym(&sub).map_err(err)?;
    let f = random::element(rng, t.space());
    t.radon_nikodym_characterization(&t_f, &f).map_err(err)
}

fn product_rule(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let (base, t, p) = random::process_base(rng, 4, 2, 4);
    let ext = extend_with_independent_events(&base, &t, &p, 2).map_err(err)?;
    let f = random::factor_element(rng, &t, &ext, 0);
    let g = random::factor_element(rng, &t, &ext, 1);
    let rule = pairwise_product_rule(&ext.cond, &f, &g, ext.factor_subspace(0), ext.factor_subspace(1)).map_err(err)?;
    ok(rule.holds && cross_term(&ext.cond, &f, &g).map_err(err)?.is_zero())
}

fn bienayme_instance(rng: &mut ChaCha8Rng, i: usize) -> Outcome {
    let n = 2 + i % 5;
    let (base, t, p) = random::process_base(rng, 3, 2, 4);
    let ext = extend_with_independent_events(&base, &t, &p, n).map_err(err)?;
    let fs: Vec<_> = (0..n).map(|k| random::factor_element(rng, &t, &ext, k)).collect();
    let subs: Vec<_> = (0..n).map(|k| ext.factor_subspace(k).clone()).collect();
    let events: Vec<_> = (0..n).collect();
    let evidence = Evidence::Construction { witness: ext.witness(), events: &events };
    ok(bienayme(&ext.cond, &fs, &subs, evidence).map_err(err)?.holds)
}

fn random_process(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    representation: Representation,
) -> Result<BernoulliProcess<Rational>, String> {
    let (base, t, f) = random::process_base(rng, 3, 2, 4);
    let n = rng.gen_range(1..=max_n);
    BernoulliProcess::new(&base, &t, &f, n, representation).map_err(err)
}

fn bernoulli_mean(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    // construction already asserts T'P_k e = f
    let p = random_process(rng, RANDOM_FULL_N, Representation::Full)?;
    ok(p.mean_check().map_err(err)?.holds)
}

fn payoff_distribution(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let p = random_process(rng, RANDOM_FULL_N, Representation::Full)?;
    distribution_holds(&p)
}

fn distribution_holds(p: &BernoulliProcess<Rational>) -> Outcome {
    let all = p.payoff_distribution_all().map_err(err)?;
    ok(all.iter().all(|c| c.holds) && p.distribution_total().map_err(err)? == p.base().unit())
}

fn process_variance(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let p = random_process(rng, RANDOM_FULL_N, Representation::Full)?;
    ok(p.process_variance().map_err(err)?.holds)
}

fn q_j(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    // q_j_family asserts every property and errors on a violation
    let p = random_process(rng, RANDOM_QJ_N, Representation::Full)?;
    p.q_j_family().map_err(err)?;
    ok(true)
}

fn lln_eps() -> [Rational; 3] {
    [Rational::ratio(1, 10), Rational::ratio(1, 4), Rational::ratio(1, 2)]
}

fn lln_bound(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let p = random_process(rng, RANDOM_FULL_N, Representation::Full)?;
    lln_holds(&p)
}

fn lln_holds(p: &BernoulliProcess<Rational>) -> Outcome {
    for eps in lln_eps() {
        if !p.lln_deviation(&eps).map_err(err)?.holds {
            return ok(false);
        }
    }
    ok(true)
}

fn representation_agreement(rng: &mut ChaCha8Rng, _: usize) -> Outcome {
    let full = random_process(rng, RANDOM_FULL_N, Representation::Full)?;
    agreement(&full)
}

fn agreement(p: &BernoulliProcess<Rational>) -> Outcome {
    let other = match p.representation() {
        Representation::Full => Representation::Aggregated,
        Representation::Aggregated => Representation::Full,
    };
    let q = BernoulliProcess::new(p.base(), p.cond(), p.f(), p.n(), other).map_err(err)?;
    let eps = lln_eps();
    ok(p.sn_statistics(&eps).map_err(err)? == q.sn_statistics(&eps).map_err(err)?)
}

/// The variance identity fails on three copies of one nontrivial event.
fn dependent_counterexample() -> Outcome {
    let base = Space::<Rational>::uniform(1).map_err(err)?;
    let t = CondExp::expectation(&base);
    let ext = extend_with_independent_events(&base, &t, &base.constant(Rational::ratio(1, 2)), 1).map_err(err)?;
    let pe = ext.projections[0].indicator();
    let sub = ext.factor_subspace(0).clone();
    let check =
        bienayme(&ext.cond, &[pe.clone(), pe.clone(), pe], &[sub.clone(), sub.clone(), sub], Evidence::Unchecked)
            .map_err(err)?;
    ok(!check.holds)
}

fn process_checks(index: usize, p: &BernoulliProcess<Rational>) -> Vec<CheckSummary> {
    let name = |s: &str| format!("process[{index}].{s}");
    let mut checks = vec![
        summarize(&name("bernoulli_mean"), "T'P_k e = f and TS_n = nf", [p.mean_check().map(|c| c.holds).map_err(err)]),
        summarize(&name("payoff_distribution"), "TP_{S_n=je}e = C(n,j) f^j (e-f)^{n-j}", [distribution_holds(p)]),
        summarize(
            &name("process_variance"),
            "var(S_n) = nf(e-f)",
            [p.process_variance().map(|c| c.holds).map_err(err)],
        ),
        summarize(&name("lln_bound"), "TP_{(|S_n/n-f|-εe)^+}e ≤ f(e-f)/(nε²)", [lln_holds(p)]),
    ];
    if p.representation() == Representation::Full && p.n() <= rieszprob::bernoulli::MAX_PERMUTATION_EVENTS {
        let outcome = p.q_j_family().map(|_| true).map_err(err);
        checks.push(summarize(&name("q_j"), "Q_j = P_{S_n=je}, pairwise disjoint, ΣQ_j = I", [outcome]));
    }
    if p.n() <= AGREEMENT_N {
        checks.push(summarize(
            &name("representation_agreement"),
            "full and aggregated S_n statistics coincide",
            [agreement(p)],
        ));
    }
    checks
}

/// Builds every configured process up front so that configuration problems
/// (including the full-representation size guard) surface before any check.
pub fn build_processes(descriptors: &[ProcessDescriptor]) -> Result<Vec<BernoulliProcess<Rational>>, CliError> {
    descriptors
        .iter()
        .enumerate()
        .map(|(i, d)| d.build::<Rational>().map_err(|e| CliError::Config(format!("process[{i}]: {e}"))))
        .collect()
}

pub fn run(config: &Config) -> Result<VerifyReport, CliError> {
    let processes = build_processes(&config.processes)?;
    let mut checks: Vec<CheckSummary> = FAMILIES
        .iter()
        .enumerate()
        .map(|(stream, family)| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(stream as u64);
            let outcomes: Vec<_> = (0..config.trials).map(|i| (family.instance)(&mut rng, i)).collect();
            summarize(family.name, family.statement, outcomes)
        })
        .collect();
    checks.push(summarize(
        "bienayme_dependent_counterexample",
        "var(3Pe) ≠ 3var(Pe): dependent copies violate the sum rule",
        [dependent_counterexample()],
    ));
    for (i, p) in processes.iter().enumerate() {
        checks.extend(process_checks(i, p));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { seed: config.seed, trials: config.trials, passed, checks })
}
