//! L²(T) statistics.
//!
//! In a finite-dimensional space every element squares into the domain of
//! `T`, so L²(T) membership is never checked at runtime.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::band::BandProjection;
use crate::check::Check;
use crate::conditional::CondExp;
use crate::error::{Error, Result};
use crate::independence::{is_independent_family, IndependenceWitness, FAMILY_CHECK_LIMIT};
use crate::io::coords_repr;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::space::Element;

/// `var(f) = T(f - Tf)² = Tf² - (Tf)²`, both forms evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport<S> {
    pub f: Element<S>,
    /// `Tf`
    pub mean: Element<S>,
    /// `Tf²`
    pub second_moment: Element<S>,
    /// `T(f - Tf)²`
    pub variance: Element<S>,
}

impl<S: Scalar> Serialize for VarianceReport<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let mut st = serializer.serialize_struct("VarianceReport", 4)?;
        st.serialize_field("f", &coords_repr(&self.f))?;
        st.serialize_field("mean", &coords_repr(&self.mean))?;
        st.serialize_field("second_moment", &coords_repr(&self.second_moment))?;
        st.serialize_field("variance", &coords_repr(&self.variance))?;
        st.end()
    }
}

/// Conditional variance of `f`. Fails if the centered and moment forms
/// disagree.
pub fn variance<S: Scalar>(t: &CondExp<S>, f: &Element<S>) -> Result<VarianceReport<S>> {
    let mean = t.apply(f)?;
    let centered = f.sub(&mean)?;
    let variance = t.apply(&centered.multiply(&centered)?)?;
    let second_moment = t.apply(&f.multiply(f)?)?;
    let moment_form = second_moment.sub(&mean.multiply(&mean)?)?;
    if !variance.approx_eq(&moment_form)? {
        return Err(Error::IdentityViolation("T(f - Tf)² differs from Tf² - (Tf)²".into()));
    }
    Ok(VarianceReport { f: f.clone(), mean, second_moment, variance })
}

/// `T[(f - Tf)(g - Tg)]`
pub fn cross_term<S: Scalar>(t: &CondExp<S>, f: &Element<S>, g: &Element<S>) -> Result<Element<S>> {
    let fc = f.sub(&t.apply(f)?)?;
    let gc = g.sub(&t.apply(g)?)?;
    t.apply(&fc.multiply(&gc)?)
}

/// Tchebichev: `T P_{(f - εe)⁺} e ≤ ε⁻² T f²` for `f ≥ 0`, `ε > 0`.
pub fn tchebichev<S: Scalar>(t: &CondExp<S>, f: &Element<S>, eps: &S) -> Result<Check<S>> {
    f.require_nonnegative()?;
    if *eps <= S::zero() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let band = BandProjection::generated_by(&f.sub_unit(eps).pos_part())?;
    let lhs = t.apply(&band.indicator())?;
    let inv_sq = S::one() / (eps.clone() * eps.clone());
    let rhs = t.apply(&f.multiply(f)?)?.scale(&inv_sq);
    Check::inequality(lhs, rhs)
}

/// How the independence hypothesis of [`bienayme`] is established.
#[derive(Debug, Clone, Copy)]
pub enum Evidence<'a, S> {
    /// Exhaustive family check; at most [`FAMILY_CHECK_LIMIT`] members.
    Verify,
    /// The family came from the product construction; `events[i]` is the
    /// event index whose factor subspace contains `subspaces[i]`.
    Construction { witness: &'a IndependenceWitness<S>, events: &'a [usize] },
    /// Skip the hypothesis. Only meaningful for counterexamples.
    Unchecked,
}

/// Bienaymé: `var(Σ f_k) = Σ var(f_k)` for a T-conditionally independent
/// family, with `f_k` in the subspace `subspaces[k] ⊇ R(T)`.
pub fn bienayme<S: Scalar>(
    t: &CondExp<S>,
    fs: &[Element<S>],
    subspaces: &[Partition],
    evidence: Evidence<'_, S>,
) -> Result<Check<S>> {
    if fs.is_empty() {
        return Err(Error::InvalidParameter("empty family".into()));
    }
    if fs.len() != subspaces.len() {
        return Err(Error::LengthMismatch { expected: fs.len(), found: subspaces.len() });
    }
    for (f, sub) in fs.iter().zip(subspaces) {
        if !sub.is_constant_on_blocks(f) {
            return Err(Error::InvalidParameter("element does not belong to its subspace".into()));
        }
    }
    let independent = match evidence {
        Evidence::Verify if fs.len() > FAMILY_CHECK_LIMIT => {
            return Err(Error::InvalidParameter(format!(
                "families larger than {FAMILY_CHECK_LIMIT} need construction evidence"
            )))
        }
        Evidence::Verify => is_independent_family(t, subspaces)?,
        Evidence::Construction { witness, events } => witness.covers(t, events, subspaces),
        Evidence::Unchecked => true,
    };
    if !independent {
        return Err(Error::NotIndependent("the family is not T-conditionally independent".into()));
    }

    let sum = fs[1..].iter().try_fold(fs[0].clone(), |acc, f| acc.add(f))?;
    let lhs = variance(t, &sum)?.variance;
    let rhs =
        fs.iter().map(|f| variance(t, f).map(|r| r.variance)).try_fold(t.space().zero(), |acc, v| acc.add(&v?))?;
    Check::equality(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::extend_with_independent_events;
    use crate::scalar::Rational;
    use crate::space::Space;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn fair_events(n: usize) -> crate::independence::Extension<Rational> {
        let base = Space::<Rational>::uniform(1).unwrap();
        let t = CondExp::expectation(&base);
        extend_with_independent_events(&base, &t, &base.constant(q(1, 2)), n).unwrap()
    }

    #[test]
    fn variance_examples() {
        let t = CondExp::new(&Space::<Rational>::uniform(3).unwrap(), Partition::new(vec![0, 0, 1]).unwrap()).unwrap();
        let in_range = t.space().element(vec![q(2, 1), q(2, 1), q(5, 1)]).unwrap();
        assert!(variance(&t, &in_range).unwrap().variance.is_zero());
        assert!(variance(&t, &t.space().constant(q(7, 3))).unwrap().variance.is_zero());

        let ext = fair_events(1);
        let r = variance(&ext.cond, &ext.projections[0].indicator()).unwrap();
        assert_eq!(r.variance, ext.space.constant(q(1, 4)));
        assert_eq!(r.second_moment, ext.space.constant(q(1, 2)));
        assert_eq!(r.mean, ext.space.constant(q(1, 2)));
    }

    #[test]
    fn tchebichev_examples() {
        let t = CondExp::expectation(&Space::<Rational>::uniform(2).unwrap());
        let e = t.space().unit();
        let c = tchebichev(&t, &e, &q(2, 1)).unwrap();
        assert!(c.holds && c.lhs.is_zero());
        assert_eq!(c.rhs, t.space().constant(q(1, 4)));

        let c = tchebichev(&t, &e, &q(1, 2)).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, e);
        assert_eq!(c.rhs, t.space().constant(q(4, 1)));

        let f = t.space().element(vec![q(0, 1), q(2, 1)]).unwrap();
        let c = tchebichev(&t, &f, &q(1, 1)).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, t.space().constant(q(1, 2)));
        assert_eq!(c.rhs, t.space().constant(q(2, 1)));

        let negative = t.space().element(vec![q(-1, 1), q(2, 1)]).unwrap();
        assert_eq!(tchebichev(&t, &negative, &q(1, 1)).unwrap_err(), Error::NegativeCoordinate { atom: 0 });
        assert!(tchebichev(&t, &f, &q(0, 1)).is_err());
    }

    #[test]
    fn bienayme_examples() {
        let ext = fair_events(2);
        let fs: Vec<_> = ext.projections.iter().map(|p| p.indicator()).collect();
        let subs: Vec<_> = (0..2).map(|k| ext.factor_subspace(k).clone()).collect();

        let c = bienayme(&ext.cond, &fs[..1], &subs[..1], Evidence::Verify).unwrap();
        assert!(c.holds);

        let c = bienayme(&ext.cond, &fs, &subs, Evidence::Verify).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, ext.space.constant(q(1, 2)));

        let witness = Evidence::Construction { witness: ext.witness(), events: &[0, 1] };
        assert!(bienayme(&ext.cond, &fs, &subs, witness).unwrap().holds);
    }

    #[test]
    fn bienayme_dependent_copies() {
        let ext = fair_events(1);
        let pe = ext.projections[0].indicator();
        let sub = ext.factor_subspace(0).clone();
        let n = 3;
        let fs = vec![pe.clone(); n];
        let subs = vec![sub; n];
        assert!(matches!(bienayme(&ext.cond, &fs, &subs, Evidence::Verify), Err(Error::NotIndependent(_))));
        let c = bienayme(&ext.cond, &fs, &subs, Evidence::Unchecked).unwrap();
        assert!(!c.holds);
        // var(nPe) = n² var(Pe)
        assert_eq!(c.lhs, ext.space.constant(q(9, 4)));
        assert_eq!(c.rhs, ext.space.constant(q(3, 4)));
    }

    #[test]
    fn cross_term_vanishes_for_independent_pair() {
        let ext = fair_events(2);
        let c = cross_term(&ext.cond, &ext.projections[0].indicator(), &ext.projections[1].indicator()).unwrap();
        assert!(c.is_zero());
        let same = cross_term(&ext.cond, &ext.projections[0].indicator(), &ext.projections[0].indicator()).unwrap();
        assert_eq!(same, ext.space.constant(q(1, 4)));
    }
}
