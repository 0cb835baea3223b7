//! Bernoulli processes: T-conditionally independent band projections `P_k`
//! with `TP_k e = f`, their payoff distribution, variance, laws of large
//! numbers and the Poisson limit.
//!
//! Two realizations are supported. The full one is the product space of
//! [`extend_with_independent_events`] with `2^n` outcomes per base atom. The
//! aggregated one keeps a single atom per `(T-block, S_n = j)` with binomial
//! weight; it is only valid for statistics that factor through `S_n` and
//! elements of `R(T)`, which covers everything in this module except the
//! `Q_j` enumeration and the martingale identity.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::band::BandProjection;
use crate::check::Check;
use crate::conditional::CondExp;
use crate::error::{Error, Result};
use crate::independence::{extend_with_independent_events, generated_subspace, Extension, MAX_PRODUCT_EVENTS};
use crate::partition::Partition;
use crate::scalar::{binomial, factorial, Scalar};
use crate::space::{Element, Space};
use crate::stats::variance;

/// Largest `n` for which `Q_j` is built by enumerating all `n!` permutations.
pub const MAX_PERMUTATION_EVENTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Full,
    Aggregated,
}

#[derive(Debug, Clone)]
pub struct BernoulliProcess<S> {
    base: Space<S>,
    cond: CondExp<S>,
    f: Element<S>,
    n: usize,
    representation: Representation,
    realized: Space<S>,
    realized_cond: CondExp<S>,
    /// `S_n` at each realized atom.
    counts: Vec<usize>,
    /// `T`-block of each realized block.
    t_block: Vec<usize>,
    extension: Option<Extension<S>>,
}

impl<S: Scalar> BernoulliProcess<S> {
    pub fn new(
        base: &Space<S>,
        cond: &CondExp<S>,
        f: &Element<S>,
        n: usize,
        representation: Representation,
    ) -> Result<Self> {
        if cond.space() != base || f.space() != base {
            return Err(Error::SpaceMismatch);
        }
        cond.require_in_range(f)?;
        f.require_probability()?;
        if n == 0 {
            return Err(Error::InvalidParameter("a process needs n >= 1".into()));
        }

        let (realized, realized_cond, counts, t_block_of_atom, extension) = match representation {
            Representation::Full => {
                if n > MAX_PRODUCT_EVENTS {
                    return Err(Error::BlowupGuard { n, limit: MAX_PRODUCT_EVENTS });
                }
                let ext = extend_with_independent_events(base, cond, f, n)?;
                let counts = (0..ext.space.atom_count()).map(|a| ext.successes(a)).collect();
                let blocks = (0..ext.space.atom_count())
                    .map(|a| cond.partition().block_of(ext.base_atom(a)))
                    .collect::<Vec<_>>();
                (ext.space.clone(), ext.cond.clone(), counts, blocks, Some(ext))
            }
            Representation::Aggregated => {
                let mut weights = Vec::new();
                let mut counts = Vec::new();
                let mut blocks = Vec::new();
                for (b, block) in cond.partition().blocks().iter().enumerate() {
                    let p = f.coord(block[0]);
                    let w_b = &cond.block_weights()[b];
                    for (j, prob) in S::binomial_row(n, p).into_iter().enumerate() {
                        let w = w_b.clone() * prob;
                        if w > S::zero() {
                            weights.push(w);
                            counts.push(j);
                            blocks.push(b);
                        }
                    }
                }
                let space = Space::new(weights)?;
                let realized_cond = CondExp::new(&space, Partition::new(blocks.clone())?)?;
                (space, realized_cond, counts, blocks, None)
            }
        };

        let t_block = realized_cond.partition().blocks().iter().map(|block| t_block_of_atom[block[0]]).collect();

        let process = Self {
            base: base.clone(),
            cond: cond.clone(),
            f: f.clone(),
            n,
            representation,
            realized,
            realized_cond,
            counts,
            t_block,
            extension,
        };
        process.check_definition()?;
        Ok(process)
    }

    /// `T'P_k e = f` for every `k` (full), or `T'S_n = nf` (aggregated,
    /// where the individual events are not materialized).
    fn check_definition(&self) -> Result<()> {
        match &self.extension {
            Some(ext) => {
                let lifted = ext.lift(&self.f)?;
                for p in &ext.projections {
                    if !self.realized_cond.apply(&p.indicator())?.approx_eq(&lifted)? {
                        return Err(Error::IdentityViolation("T'P_k e differs from f".into()));
                    }
                }
                Ok(())
            }
            None => {
                if self.mean_check()?.holds {
                    Ok(())
                } else {
                    Err(Error::IdentityViolation("T'S_n differs from nf".into()))
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &Element<S> {
        &self.f
    }

    pub fn base(&self) -> &Space<S> {
        &self.base
    }

    pub fn cond(&self) -> &CondExp<S> {
        &self.cond
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn realized_space(&self) -> &Space<S> {
        &self.realized
    }

    /// `T'` on the realized space.
    pub fn realized_cond(&self) -> &CondExp<S> {
        &self.realized_cond
    }

    /// The event projections `P_1, ..., P_n` (full representation only).
    pub fn projections(&self) -> Option<&[BandProjection<S>]> {
        self.extension.as_ref().map(|e| e.projections.as_slice())
    }

    pub fn extension(&self) -> Option<&Extension<S>> {
        self.extension.as_ref()
    }

    fn require_full(&self) -> Result<&Extension<S>> {
        self.extension.as_ref().ok_or(Error::RepresentationUnsupported)
    }

    /// Lifts a base element to the realized space. The aggregated
    /// representation only accepts elements of `R(T)`.
    pub fn lift(&self, x: &Element<S>) -> Result<Element<S>> {
        match &self.extension {
            Some(ext) => ext.lift(x),
            None => {
                self.cond.require_in_range(x)?;
                let values = self.cond.block_means(x)?;
                let blocks = self.realized_cond.partition();
                Ok(self.realized.element_from_fn(|a| values[self.t_block[blocks.block_of(a)]].clone()))
            }
        }
    }

    /// Pushes an element of `R(T')` down to the base space.
    pub fn to_base(&self, y: &Element<S>) -> Result<Element<S>> {
        self.realized_cond.require_in_range(y)?;
        let values = self.realized_cond.partition().blocks().iter().map(|b| y.coord(b[0]).clone()).collect();
        self.push_down(values)
    }

    /// One value per `T'`-block to the base space.
    fn push_down(&self, values: Vec<S>) -> Result<Element<S>> {
        let mut per_t_block = vec![S::zero(); self.cond.partition().block_count()];
        for (value, &tb) in values.into_iter().zip(&self.t_block) {
            per_t_block[tb] = value;
        }
        self.cond.from_block_values(&per_t_block)
    }

    /// `T'` followed by [`Self::to_base`], without materializing `T'y`.
    fn expect(&self, y: &Element<S>) -> Result<Element<S>> {
        self.push_down(self.realized_cond.block_means(y)?)
    }

    /// `S_n = Σ P_k e` on the realized space.
    pub fn partial_sum(&self) -> Element<S> {
        self.realized.element_from_fn(|a| S::from_i64(self.counts[a] as i64))
    }

    /// `T S_n = n f`
    pub fn mean_check(&self) -> Result<Check<S>> {
        let lhs = self.expect(&self.partial_sum())?;
        let rhs = self.f.scale(&S::from_i64(self.n as i64));
        Check::equality(lhs, rhs)
    }

    fn check_level(&self, j: usize) -> Result<()> {
        if j > self.n {
            Err(Error::LevelOutOfRange { j, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `P_{S_n = je} = (I - P_{(S_n - je)⁺})(I - P_{(S_n - je)⁻})`, checked
    /// against the direct level-set mask.
    pub fn level_band(&self, j: usize) -> Result<BandProjection<S>> {
        self.check_level(j)?;
        let shifted = self.partial_sum().sub_unit(&S::from_i64(j as i64));
        let above = BandProjection::generated_by(&shifted.pos_part())?;
        let below = BandProjection::generated_by(&shifted.neg_part())?;
        let band = above.complement().compose(&below.complement())?;
        let direct = BandProjection::from_predicate(&self.realized, |a| self.counts[a] == j);
        if band != direct {
            return Err(Error::IdentityViolation(format!("level band for j = {j} differs from the level set")));
        }
        Ok(band)
    }

    fn closed_form_payoffs(&self, levels: &[usize]) -> Vec<Element<S>> {
        let n = self.n;
        if S::EXACT {
            // f-algebra route: C(n, j) f^j (e - f)^(n-j)
            let e = self.base.unit();
            let g = e.sub(&self.f).expect("same space");
            let mut f_pow = vec![e.clone()];
            let mut g_pow = vec![e];
            for k in 1..=n {
                f_pow.push(f_pow[k - 1].multiply(&self.f).expect("same space"));
                g_pow.push(g_pow[k - 1].multiply(&g).expect("same space"));
            }
            levels
                .iter()
                .map(|&j| f_pow[j].multiply(&g_pow[n - j]).expect("same space").scale(&binomial::<S>(n, j)))
                .collect()
        } else {
            levels.iter().map(|&j| self.f.map(|p| S::binomial_term(n, j, p))).collect()
        }
    }

    /// `T P_{S_n = je} e` from the realized space against
    /// `C(n, j) f^j (e - f)^(n - j)`.
    pub fn payoff_distribution(&self, j: usize) -> Result<Check<S>> {
        self.check_level(j)?;
        let lhs = self.expect(&self.level_band(j)?.indicator())?;
        let rhs = self.closed_form_payoffs(&[j]).pop().expect("one level");
        Check::equality(lhs, rhs)
    }

    /// [`Self::payoff_distribution`] for every `j = 0..=n`, sharing the powers.
    pub fn payoff_distribution_all(&self) -> Result<Vec<Check<S>>> {
        let levels: Vec<usize> = (0..=self.n).collect();
        let rhs = self.closed_form_payoffs(&levels);
        levels
            .into_iter()
            .zip(rhs)
            .map(|(j, rhs)| Check::equality(self.expect(&self.level_band(j)?.indicator())?, rhs))
            .collect()
    }

    /// `Σ_j T P_{S_n = je} e`, which must be `e`.
    pub fn distribution_total(&self) -> Result<Element<S>> {
        (0..=self.n).try_fold(self.base.zero(), |acc, j| acc.add(&self.expect(&self.level_band(j)?.indicator())?))
    }

    /// `Q_j = (1 / j!(n-j)!) Σ_σ P_{σ(1)}⋯P_{σ(j)}(I - P_{σ(j+1)})⋯(I - P_{σ(n)})`
    /// by enumeration of all permutations.
    ///
    /// Checks that every product occurs exactly `j!(n-j)!` times, that distinct
    /// products are disjoint, that `Q_j = P_{S_n = je}` and `Q_j S_n = j Q_j e`.
    pub fn q_j_projection(&self, j: usize) -> Result<BandProjection<S>> {
        let ext = self.require_full()?;
        self.check_level(j)?;
        if self.n > MAX_PERMUTATION_EVENTS {
            return Err(Error::InvalidParameter(format!(
                "Q_j enumeration is limited to n <= {MAX_PERMUTATION_EVENTS}"
            )));
        }
        let n = self.n;
        let full = BandProjection::full(&self.realized);

        let mut products: HashMap<u32, (BandProjection<S>, u64)> = HashMap::new();
        for sigma in (0..n).permutations(n) {
            let key = sigma[..j].iter().fold(0u32, |acc, &k| acc | 1 << k);
            if let Some(entry) = products.get_mut(&key) {
                entry.1 += 1;
                continue;
            }
            let mut band = full.clone();
            for (pos, &k) in sigma.iter().enumerate() {
                let p = &ext.projections[k];
                band = if pos < j { band.compose(p)? } else { band.compose(&p.complement())? };
            }
            products.insert(key, (band, 1));
        }

        let multiplicity = (1..=j as u64).product::<u64>() * (1..=(n - j) as u64).product::<u64>();
        let bands: Vec<_> = products.into_values().collect();
        if let Some((_, count)) = bands.iter().find(|(_, count)| *count != multiplicity) {
            return Err(Error::IdentityViolation(format!(
                "a product band occurs {count} times, expected j!(n-j)! = {multiplicity}"
            )));
        }
        for (a, b) in bands.iter().tuple_combinations() {
            if !a.0.is_disjoint(&b.0)? {
                return Err(Error::IdentityViolation("distinct permutation products overlap".into()));
            }
        }
        let q_j = bands.iter().try_fold(BandProjection::empty(&self.realized), |acc, (b, _)| acc.union(b))?;

        if q_j != self.level_band(j)? {
            return Err(Error::IdentityViolation(format!("Q_{j} differs from P_(S_n = {j}e)")));
        }
        let lhs = q_j.apply(&self.partial_sum())?;
        let rhs = q_j.indicator().scale(&S::from_i64(j as i64));
        if lhs != rhs {
            return Err(Error::IdentityViolation(format!("Q_{j} S_n differs from {j} Q_{j} e")));
        }
        Ok(q_j)
    }

    /// All `Q_0, ..., Q_n`, checked to be mutually disjoint and to sum to `I`.
    pub fn q_j_family(&self) -> Result<Vec<BandProjection<S>>> {
        let family = (0..=self.n).map(|j| self.q_j_projection(j)).collect::<Result<Vec<_>>>()?;
        for (a, b) in family.iter().tuple_combinations() {
            if !a.is_disjoint(b)? {
                return Err(Error::IdentityViolation("Q_i Q_j != 0".into()));
            }
        }
        let total = family.iter().try_fold(self.realized.zero(), |acc, q| acc.add(&q.indicator()))?;
        if total != self.realized.unit() {
            return Err(Error::IdentityViolation("Σ Q_j != I".into()));
        }
        Ok(family)
    }

    /// `var(S_n)` from the stats module against `n f (e - f)`.
    pub fn process_variance(&self) -> Result<Check<S>> {
        let report = variance(&self.realized_cond, &self.partial_sum())?;
        let lhs = self.to_base(&report.variance)?;
        let e = self.base.unit();
        let rhs = self.f.multiply(&e.sub(&self.f)?)?.scale(&S::from_i64(self.n as i64));
        Check::equality(lhs, rhs)
    }

    /// Bernoulli law of large numbers: `T P_{(|S_n/n - f| - εe)⁺} e` against
    /// the rate bound `f(e - f) / (n ε²)`.
    ///
    /// Also checks `P_{(|S_n/n - f| - εe)⁺} = P_{(|S_n - nf| - nεe)⁺}`.
    pub fn lln_deviation(&self, eps: &S) -> Result<Check<S>> {
        if *eps <= S::zero() {
            return Err(Error::InvalidParameter("eps must be positive".into()));
        }
        let n = S::from_i64(self.n as i64);
        let f = self.lift(&self.f)?;
        let s = self.partial_sum();

        let mean_dev = s.scale(&(S::one() / n.clone())).sub(&f)?.abs().sub_unit(eps);
        let band = BandProjection::generated_by(&mean_dev.pos_part())?;
        let sum_dev = s.sub(&f.scale(&n))?.abs().sub_unit(&(n.clone() * eps.clone()));
        if band != BandProjection::generated_by(&sum_dev.pos_part())? {
            return Err(Error::IdentityViolation("deviation bands of S_n/n and S_n disagree".into()));
        }

        let lhs = self.expect(&band.indicator())?;
        let e = self.base.unit();
        let scale = S::one() / (n * eps.clone() * eps.clone());
        let bound = self.f.multiply(&e.sub(&self.f)?)?.scale(&scale);
        Check::inequality(lhs, bound)
    }

    /// `T|f - S_n/n|`
    pub fn weak_lln_term(&self) -> Result<Element<S>> {
        let f = self.lift(&self.f)?;
        let avg = self.partial_sum().scale(&(S::one() / S::from_i64(self.n as i64)));
        self.expect(&f.sub(&avg)?.abs())
    }

    /// `T_{i-1}(P_i e) = T(P_i e) = f` for every `i`, where `T_{i-1}` is the
    /// conditional expectation onto `⟨R(T), P_1 e, ..., P_{i-1} e⟩`.
    pub fn martingale_difference_identity(&self) -> Result<bool> {
        let ext = self.require_full()?;
        let f = ext.lift(&self.f)?;
        let indicators: Vec<_> = ext.projections.iter().map(|p| p.indicator()).collect();
        for i in 0..self.n {
            let past: Vec<&Element<S>> = indicators[..i].iter().collect();
            let t_prev = self.realized_cond.radon_nikodym(&generated_subspace(&self.realized_cond, &past)?)?;
            if !t_prev.apply(&indicators[i])?.approx_eq(&f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every `S_n`-statistic the two representations must agree on.
    pub fn sn_statistics(&self, eps: &[S]) -> Result<SnStatistics<S>> {
        Ok(SnStatistics {
            mean: self.expect(&self.partial_sum())?,
            payoffs: (0..=self.n).map(|j| self.expect(&self.level_band(j)?.indicator())).collect::<Result<_>>()?,
            variance: self.to_base(&variance(&self.realized_cond, &self.partial_sum())?.variance)?,
            lln: eps.iter().map(|e| self.lln_deviation(e).map(|c| c.lhs)).collect::<Result<_>>()?,
            weak_lln: self.weak_lln_term()?,
        })
    }
}

/// Statistics of `S_n`, pushed to the base space.
#[derive(Debug, Clone, PartialEq)]
pub struct SnStatistics<S> {
    pub mean: Element<S>,
    pub payoffs: Vec<Element<S>>,
    pub variance: Element<S>,
    pub lln: Vec<Element<S>>,
    pub weak_lln: Element<S>,
}

/// Row `n` of the Poisson triangular array: the payoff distribution at level
/// `j` of the process with success element `g/n` (so that `TS_n = g`).
/// Evaluated on the aggregated representation.
pub fn poisson_scheme<S: Scalar>(
    base: &Space<S>,
    cond: &CondExp<S>,
    g: &Element<S>,
    n: usize,
    j: usize,
) -> Result<Element<S>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if j > n {
        return Err(Error::LevelOutOfRange { j, n });
    }
    let g_n = g.scale(&(S::one() / S::from_i64(n as i64)));
    g_n.require_probability()?;
    let process = BernoulliProcess::new(base, cond, &g_n, n, Representation::Aggregated)?;
    let check = process.payoff_distribution(j)?;
    if !check.holds {
        return Err(Error::IdentityViolation(format!("payoff distribution at level {j} of row {n}")));
    }
    Ok(check.lhs)
}

/// `(g^j / j!) e^{-g}`
pub fn poisson_limit(g: &Element<f64>, j: usize) -> Result<Element<f64>> {
    g.require_nonnegative()?;
    let coefficient = 1.0 / factorial::<f64>(j);
    g.powi(j).scale(&coefficient).multiply(&g.exp_neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn homogeneous<S: Scalar>(p: S, n: usize, repr: Representation) -> BernoulliProcess<S> {
        let base = Space::<S>::uniform(1).unwrap();
        let t = CondExp::expectation(&base);
        BernoulliProcess::new(&base, &t, &base.constant(p), n, repr).unwrap()
    }

    fn two_block(p: [Rational; 2], n: usize, repr: Representation) -> BernoulliProcess<Rational> {
        let base = Space::<Rational>::uniform(2).unwrap();
        let t = CondExp::identity(&base);
        let f = base.element(p.to_vec()).unwrap();
        BernoulliProcess::new(&base, &t, &f, n, repr).unwrap()
    }

    #[test]
    fn single_fair_event_full() {
        let proc = homogeneous(q(1, 2), 1, Representation::Full);
        assert_eq!(proc.realized_space().atom_count(), 2);
        let p = &proc.projections().unwrap()[0];
        assert_eq!(p.mask(), &[false, true]);
        assert_eq!(proc.partial_sum(), p.indicator());
    }

    #[test]
    fn aggregated_weights_are_binomial() {
        let proc = homogeneous(q(1, 2), 10, Representation::Aggregated);
        assert_eq!(proc.realized_space().atom_count(), 11);
        let expected: Vec<_> = (0..=10).map(|j| binomial::<Rational>(10, j) / Rational::from_i64(1024)).collect();
        assert_eq!(proc.realized_space().weights(), expected.as_slice());
        assert_eq!(proc.realized_space().total_weight(), q(1, 1));
    }

    #[test]
    fn construction_errors() {
        let base = Space::<Rational>::uniform(2).unwrap();
        let t = CondExp::expectation(&base);
        let split = base.element(vec![q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(BernoulliProcess::new(&base, &t, &split, 3, Representation::Full).unwrap_err(), Error::NotInRange);
        assert!(matches!(
            BernoulliProcess::new(&base, &t, &base.constant(q(-1, 3)), 3, Representation::Aggregated),
            Err(Error::InvalidProbability { .. })
        ));
        assert_eq!(
            BernoulliProcess::new(&base, &t, &base.constant(q(1, 2)), 25, Representation::Full).unwrap_err(),
            Error::BlowupGuard { n: 25, limit: 20 }
        );
        // the aggregated representation has no such limit
        assert!(BernoulliProcess::new(&base, &t, &base.constant(q(1, 2)), 25, Representation::Aggregated).is_ok());
    }

    #[test]
    fn partial_sum_examples() {
        let proc = homogeneous(q(1, 1), 4, Representation::Full);
        assert_eq!(proc.partial_sum(), proc.realized_space().constant(q(4, 1)));
        let proc = homogeneous(q(1, 3), 5, Representation::Full);
        let c = proc.mean_check().unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, proc.base().constant(q(5, 3)));
    }

    #[test]
    fn payoff_examples() {
        let proc = homogeneous(q(1, 2), 2, Representation::Full);
        let c = proc.payoff_distribution(1).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, proc.base().constant(q(1, 2)));

        let proc = homogeneous(q(1, 1), 3, Representation::Aggregated);
        assert_eq!(proc.payoff_distribution(3).unwrap().lhs, proc.base().unit());
        assert_eq!(proc.payoff_distribution(4).unwrap_err(), Error::LevelOutOfRange { j: 4, n: 3 });
    }

    #[test]
    fn payoff_two_blocks_against_enumeration() {
        let proc = two_block([q(1, 3), q(2, 3)], 6, Representation::Full);
        let c = proc.payoff_distribution(2).unwrap();
        assert!(c.holds);
        // brute force over the 2^6 outcomes of each block
        let brute = |p: Rational| -> Rational {
            (0u32..64)
                .filter(|bits| bits.count_ones() == 2)
                .map(|bits| {
                    (0..6)
                        .fold(q(1, 1), |acc, k| acc * if bits >> k & 1 == 1 { p.clone() } else { q(1, 1) - p.clone() })
                })
                .fold(q(0, 1), |a, b| a + b)
        };
        assert_eq!(*c.lhs.coord(0), brute(q(1, 3)));
        assert_eq!(*c.lhs.coord(1), brute(q(2, 3)));
        assert_eq!(*c.lhs.coord(0), q(15, 1) * q(1, 9) * q(16, 81));
        assert_eq!(*c.lhs.coord(1), q(15, 1) * q(4, 9) * q(1, 81));
    }

    #[test]
    fn q_j_examples() {
        let proc = homogeneous(q(1, 2), 1, Representation::Full);
        let p1 = &proc.projections().unwrap()[0];
        assert_eq!(proc.q_j_projection(0).unwrap(), p1.complement());
        assert_eq!(proc.q_j_projection(1).unwrap(), *p1);

        let proc = homogeneous(q(1, 2), 3, Representation::Full);
        let family = proc.q_j_family().unwrap();
        assert_eq!(family.len(), 4);

        let agg = homogeneous(q(1, 2), 3, Representation::Aggregated);
        assert_eq!(agg.q_j_projection(1).unwrap_err(), Error::RepresentationUnsupported);
        let big = homogeneous(q(1, 2), 9, Representation::Full);
        assert!(matches!(big.q_j_projection(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn variance_examples() {
        let c = homogeneous(q(1, 2), 2, Representation::Full).process_variance().unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, c.lhs.space().constant(q(1, 2)));
        for p in [q(0, 1), q(1, 1)] {
            let c = homogeneous(p, 4, Representation::Full).process_variance().unwrap();
            assert!(c.holds && c.lhs.is_zero());
        }
        let c = homogeneous(q(1, 3), 7, Representation::Aggregated).process_variance().unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, c.lhs.space().constant(q(14, 9)));
    }

    #[test]
    fn lln_examples() {
        for p in [q(0, 1), q(1, 1)] {
            let c = homogeneous(p, 5, Representation::Full).lln_deviation(&q(1, 10)).unwrap();
            assert!(c.holds && c.lhs.is_zero());
        }
        let c = homogeneous(q(1, 2), 4, Representation::Aggregated).lln_deviation(&q(1, 4)).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, c.lhs.space().constant(q(1, 8)));
        assert_eq!(c.rhs, c.rhs.space().unit());
    }

    #[test]
    fn weak_lln_examples() {
        for p in [q(0, 1), q(1, 1)] {
            assert!(homogeneous(p, 3, Representation::Full).weak_lln_term().unwrap().is_zero());
        }
        let v = homogeneous(q(1, 2), 2, Representation::Full).weak_lln_term().unwrap();
        assert_eq!(v, v.space().constant(q(1, 4)));
    }

    #[test]
    fn martingale_identity_holds() {
        let proc = two_block([q(1, 3), q(1, 2)], 4, Representation::Full);
        assert!(proc.martingale_difference_identity().unwrap());
    }

    #[test]
    fn full_and_aggregated_agree() {
        let eps = [q(1, 10), q(1, 3)];
        let full = two_block([q(1, 3), q(2, 3)], 8, Representation::Full).sn_statistics(&eps).unwrap();
        let agg = two_block([q(1, 3), q(2, 3)], 8, Representation::Aggregated).sn_statistics(&eps).unwrap();
        assert_eq!(full, agg);
    }

    #[test]
    fn poisson_examples() {
        let base = Space::<Rational>::uniform(1).unwrap();
        let t = CondExp::expectation(&base);
        assert_eq!(poisson_scheme(&base, &t, &base.zero(), 5, 0).unwrap(), base.unit());
        assert_eq!(poisson_scheme(&base, &t, &base.unit(), 2, 1).unwrap(), base.constant(q(1, 2)));
        assert!(matches!(
            poisson_scheme(&base, &t, &base.constant(q(3, 1)), 2, 1),
            Err(Error::InvalidProbability { .. })
        ));

        let fbase = Space::<f64>::uniform(1).unwrap();
        let g = fbase.zero();
        assert_eq!(poisson_limit(&g, 0).unwrap(), fbase.unit());
        assert!(poisson_limit(&g, 3).unwrap().is_zero());
        let limit = poisson_limit(&fbase.unit(), 2).unwrap();
        assert!((limit.coord(0) - 0.5 * (-1.0_f64).exp()).abs() < 1e-15);
        assert!((limit.coord(0) - 0.1839).abs() < 1e-4);
    }

    #[test]
    fn poisson_row_at_large_n() {
        let base = Space::<f64>::uniform(1).unwrap();
        let t = CondExp::expectation(&base);
        let row = poisson_scheme(&base, &t, &base.unit(), 10_000, 1).unwrap();
        assert!((row.coord(0) - (-1.0_f64).exp()).abs() < 1e-4);
    }
}
