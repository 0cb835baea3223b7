//! T-conditional independence of band projections and subspaces, and the
//! product-space construction that manufactures independent events.

use crate::band::BandProjection;
use crate::check::Check;
use crate::conditional::CondExp;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::space::{Element, Space};

/// Most events a product space may carry (`2^n` atoms per base atom).
pub const MAX_PRODUCT_EVENTS: usize = 20;

/// Families larger than this are not checked exhaustively over index-set pairs.
pub const FAMILY_CHECK_LIMIT: usize = 4;

fn same_space<S: Scalar>(a: &Space<S>, b: &Space<S>) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

fn factorizes<S: Scalar>(t: &CondExp<S>, p: &BandProjection<S>, q: &BandProjection<S>, w: &Element<S>) -> Result<bool> {
    let tptq = t.apply(&p.apply(&t.apply(&q.apply(w)?)?)?)?;
    let tpq = t.apply(&p.apply(&q.apply(w)?)?)?;
    let tqtp = t.apply(&q.apply(&t.apply(&p.apply(w)?)?)?)?;
    Ok(tptq.approx_eq(&tpq)? && tpq.approx_eq(&tqtp)?)
}

/// `TPTQw = TPQw = TQTPw` for every `w ∈ R(T)`, checked on the block
/// indicators of `T` (which span the range).
pub fn are_independent_projections<S: Scalar>(
    t: &CondExp<S>,
    p: &BandProjection<S>,
    q: &BandProjection<S>,
) -> Result<bool> {
    same_space(t.space(), p.space())?;
    same_space(t.space(), q.space())?;
    for b in 0..t.partition().block_count() {
        if !factorizes(t, p, q, &t.block_indicator(b))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The weaker form `TPTQe = TPQe = TQTPe`, on `e` only.
pub fn are_independent_projections_on_unit<S: Scalar>(
    t: &CondExp<S>,
    p: &BandProjection<S>,
    q: &BandProjection<S>,
) -> Result<bool> {
    same_space(t.space(), p.space())?;
    same_space(t.space(), q.space())?;
    factorizes(t, p, q, &t.space().unit())
}

/// `⟨R(T), x_1, ..., x_k⟩`: the coarsest refinement of `T`'s partition on
/// which every `x_i` is block-constant.
pub fn generated_subspace<S: Scalar>(t: &CondExp<S>, elements: &[&Element<S>]) -> Result<Partition> {
    elements.iter().try_fold(t.partition().clone(), |acc, x| {
        same_space(t.space(), x.space())?;
        acc.refine_by(*x)
    })
}

/// Independence of two subspaces `F_1, F_2 ⊇ R(T)`: `T_1T_2 = T = T_2T_1`
/// with `T_i` the Radon–Nikodým operators, on atom indicators.
///
/// The equivalent restriction form (`T_i f = Tf` for `f` in the other
/// subspace) is evaluated as well; disagreement is reported as an error.
pub fn are_independent_subspaces<S: Scalar>(t: &CondExp<S>, f1: &Partition, f2: &Partition) -> Result<bool> {
    let t1 = t.radon_nikodym(f1)?;
    let t2 = t.radon_nikodym(f2)?;
    let space = t.space();

    let mut operator_form = true;
    for atom in 0..space.atom_count() {
        let x = space.atom_indicator(atom);
        let tx = t.apply(&x)?;
        if !t1.apply(&t2.apply(&x)?)?.approx_eq(&tx)? || !t2.apply(&t1.apply(&x)?)?.approx_eq(&tx)? {
            operator_form = false;
            break;
        }
    }

    let mut restriction_form = true;
    'outer: for (ti, other) in [(&t1, &t2), (&t2, &t1)] {
        for b in 0..other.partition().block_count() {
            let f = other.block_indicator(b);
            if !ti.apply(&f)?.approx_eq(&t.apply(&f)?)? {
                restriction_form = false;
                break 'outer;
            }
        }
    }

    if operator_form != restriction_form {
        return Err(Error::IdentityViolation(
            "operator and restriction forms of subspace independence disagree".into(),
        ));
    }
    Ok(operator_form)
}

/// Independence of a family of subspaces: for every pair of disjoint,
/// nonempty index sets the generated subspaces are independent.
/// Exhaustive, so limited to [`FAMILY_CHECK_LIMIT`] members.
pub fn is_independent_family<S: Scalar>(t: &CondExp<S>, family: &[Partition]) -> Result<bool> {
    let k = family.len();
    if k > FAMILY_CHECK_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exhaustive family check is limited to {FAMILY_CHECK_LIMIT} members, got {k}"
        )));
    }
    for part in family {
        if !part.refines(t.partition()) {
            return Err(Error::NotRefinement);
        }
    }
    let join = |set: u32| -> Result<Partition> {
        (0..k).filter(|i| set >> i & 1 == 1).try_fold(t.partition().clone(), |acc, i| acc.common_refinement(&family[i]))
    };
    for a in 1u32..(1 << k) {
        for b in (a + 1)..(1 << k) {
            if a & b != 0 {
                continue;
            }
            if !are_independent_subspaces(t, &join(a)?, &join(b)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Product rule for independent subspaces: `T(fg) = Tf·Tg` when
/// `f ∈ F_f`, `g ∈ F_g` and `F_f`, `F_g` are T-conditionally independent.
pub fn pairwise_product_rule<S: Scalar>(
    t: &CondExp<S>,
    f: &Element<S>,
    g: &Element<S>,
    f_sub: &Partition,
    g_sub: &Partition,
) -> Result<Check<S>> {
    same_space(t.space(), f.space())?;
    same_space(t.space(), g.space())?;
    for (x, sub) in [(f, f_sub), (g, g_sub)] {
        if !sub.refines(t.partition()) {
            return Err(Error::NotRefinement);
        }
        if !sub.is_constant_on_blocks(x) {
            return Err(Error::InvalidParameter("element does not belong to its subspace".into()));
        }
    }
    if !are_independent_subspaces(t, f_sub, g_sub)? {
        return Err(Error::NotIndependent("T_1 T_2 = T = T_2 T_1 fails for the given subspaces".into()));
    }
    let lhs = t.apply(&f.multiply(g)?)?;
    let rhs = t.apply(f)?.multiply(&t.apply(g)?)?;
    Check::equality(lhs, rhs)
}

/// Proof that a family of band projections came out of
/// [`extend_with_independent_events`], standing in for the exponential
/// family check.
#[derive(Debug, Clone)]
pub struct IndependenceWitness<S> {
    cond: CondExp<S>,
    factors: Vec<Partition>,
}

impl<S: Scalar> IndependenceWitness<S> {
    /// Whether each `subspaces[i]` sits inside the factor subspace of event
    /// `events[i]` (distinct events, all containing `R(T)`), so that the
    /// family inherits the construction's independence.
    pub fn covers(&self, t: &CondExp<S>, events: &[usize], subspaces: &[Partition]) -> bool {
        if *t != self.cond || events.len() != subspaces.len() {
            return false;
        }
        let mut seen = vec![false; self.factors.len()];
        events.iter().zip(subspaces).all(|(&k, sub)| {
            let fresh = k < seen.len() && !std::mem::replace(&mut seen[k], true);
            fresh && sub.refines(t.partition()) && self.factors[k].refines(sub)
        })
    }
}

/// Output of [`extend_with_independent_events`].
#[derive(Debug, Clone)]
pub struct Extension<S> {
    pub space: Space<S>,
    pub cond: CondExp<S>,
    pub projections: Vec<BandProjection<S>>,
    base_space: Space<S>,
    base_atom: Vec<usize>,
    outcomes: Vec<u32>,
    witness: IndependenceWitness<S>,
}

impl<S: Scalar> Extension<S> {
    /// Number of events.
    pub fn events(&self) -> usize {
        self.projections.len()
    }

    /// Base atom underlying a product atom.
    pub fn base_atom(&self, atom: usize) -> usize {
        self.base_atom[atom]
    }

    /// Success bits of a product atom (bit `k` set iff event `k` occurs).
    pub fn outcome(&self, atom: usize) -> u32 {
        self.outcomes[atom]
    }

    /// Number of successes at a product atom.
    pub fn successes(&self, atom: usize) -> usize {
        self.outcomes[atom].count_ones() as usize
    }

    /// Pulls a base element back along the projection onto base atoms.
    pub fn lift(&self, x: &Element<S>) -> Result<Element<S>> {
        same_space(&self.base_space, x.space())?;
        Ok(self.space.element_from_fn(|a| x.coord(self.base_atom[a]).clone()))
    }

    /// `⟨R(T'), P_k e⟩`
    pub fn factor_subspace(&self, k: usize) -> &Partition {
        &self.witness.factors[k]
    }

    pub fn witness(&self) -> &IndependenceWitness<S> {
        &self.witness
    }
}

/// Builds `n` T-conditionally independent events with `T'P_k e = f`.
///
/// Atoms are `(base atom i, ε ∈ {0,1}^n)` with weight
/// `w_i ∏_k p_i^{ε_k} (1 - p_i)^{1 - ε_k}`, `p = f`; zero-weight atoms are
/// dropped. `T'` averages over all product atoms whose base atoms share a
/// `T`-block, and `P_k` keeps the atoms with `ε_k = 1`.
pub fn extend_with_independent_events<S: Scalar>(
    base: &Space<S>,
    t: &CondExp<S>,
    f: &Element<S>,
    n: usize,
) -> Result<Extension<S>> {
    same_space(base, t.space())?;
    t.require_in_range(f)?;
    f.require_probability()?;
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one event".into()));
    }
    if n > MAX_PRODUCT_EVENTS {
        return Err(Error::BlowupGuard { n, limit: MAX_PRODUCT_EVENTS });
    }

    let mut weights = Vec::new();
    let mut base_atom = Vec::new();
    let mut outcomes = Vec::new();
    for (i, w) in base.weights().iter().enumerate() {
        let p = f.coord(i).clone();
        let q = S::one() - p.clone();
        for bits in 0u32..(1u32 << n) {
            let successes = bits.count_ones() as usize;
            let weight = w.clone() * p.powi(successes) * q.powi(n - successes);
            if weight.is_zero() {
                continue;
            }
            weights.push(weight);
            base_atom.push(i);
            outcomes.push(bits);
        }
    }

    let space = Space::new(weights)?;
    let labels = base_atom.iter().map(|&i| t.partition().block_of(i)).collect();
    let cond = CondExp::new(&space, Partition::new(labels)?)?;
    let projections: Vec<_> =
        (0..n).map(|k| BandProjection::from_predicate(&space, |a| outcomes[a] >> k & 1 == 1)).collect();
    let factors =
        projections.iter().map(|p| generated_subspace(&cond, &[&p.indicator()])).collect::<Result<Vec<_>>>()?;

    Ok(Extension {
        witness: IndependenceWitness { cond: cond.clone(), factors },
        space,
        cond,
        projections,
        base_space: base.clone(),
        base_atom,
        outcomes,
    })
}
