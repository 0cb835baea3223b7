//! Conditional expectation operators as block-wise weighted averages.
//!
//! For a partition of the atoms, `(Tx)_i = Σ_{k ~ i} w_k x_k / Σ_{k ~ i} w_k`
//! where `k ~ i` means same block. `T` is a strictly positive projection with
//! `Te = e`; its range is the block-constant elements.

use crate::band::BandProjection;
use crate::check::Check;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::space::{Element, Space};

#[derive(Debug, Clone, PartialEq)]
pub struct CondExp<S> {
    space: Space<S>,
    partition: Partition,
    block_weights: Vec<S>,
}

impl<S: Scalar> CondExp<S> {
    pub fn new(space: &Space<S>, partition: Partition) -> Result<Self> {
        if partition.atom_count() != space.atom_count() {
            return Err(Error::LengthMismatch { expected: space.atom_count(), found: partition.atom_count() });
        }
        let block_weights = partition
            .blocks()
            .iter()
            .map(|block| block.iter().fold(S::zero(), |acc, &a| acc + space.weights()[a].clone()))
            .collect();
        Ok(Self { space: space.clone(), partition, block_weights })
    }

    /// `T = I`
    pub fn identity(space: &Space<S>) -> Self {
        Self::new(space, Partition::discrete(space.atom_count())).expect("matching size")
    }

    /// The unconditional expectation: one block.
    pub fn expectation(space: &Space<S>) -> Self {
        Self::new(space, Partition::single_block(space.atom_count())).expect("matching size")
    }

    pub fn space(&self) -> &Space<S> {
        &self.space
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Total weight of each block.
    pub fn block_weights(&self) -> &[S] {
        &self.block_weights
    }

    fn check_space(&self, x: &Element<S>) -> Result<()> {
        if *x.space() == self.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Block averages of `x`, one per block.
    pub fn block_means(&self, x: &Element<S>) -> Result<Vec<S>> {
        self.check_space(x)?;
        let w = self.space.weights();
        Ok(self
            .partition
            .blocks()
            .iter()
            .zip(&self.block_weights)
            .map(|(block, total)| {
                let sum = block.iter().fold(S::zero(), |acc, &a| {
                    let v = x.coord(a);
                    if v.is_zero() {
                        acc
                    } else {
                        acc + w[a].clone() * v.clone()
                    }
                });
                sum / total.clone()
            })
            .collect())
    }

    pub fn apply(&self, x: &Element<S>) -> Result<Element<S>> {
        let means = self.block_means(x)?;
        Ok(self.space.element_from_fn(|i| means[self.partition.block_of(i)].clone()))
    }

    /// Lifts one value per block to the block-constant element.
    pub fn from_block_values(&self, values: &[S]) -> Result<Element<S>> {
        if values.len() != self.partition.block_count() {
            return Err(Error::LengthMismatch { expected: self.partition.block_count(), found: values.len() });
        }
        Ok(self.space.element_from_fn(|i| values[self.partition.block_of(i)].clone()))
    }

    /// Indicator of block `b`; the block indicators span `R(T)`.
    pub fn block_indicator(&self, b: usize) -> Element<S> {
        self.space.element_from_fn(|i| if self.partition.block_of(i) == b { S::one() } else { S::zero() })
    }

    /// `x ∈ R(T)`: constant on every block.
    pub fn is_in_range(&self, x: &Element<S>) -> bool {
        *x.space() == self.space && self.partition.is_constant_on_blocks(x)
    }

    pub fn require_in_range(&self, x: &Element<S>) -> Result<()> {
        self.check_space(x)?;
        if self.partition.is_constant_on_blocks(x) {
            Ok(())
        } else {
            Err(Error::NotInRange)
        }
    }

    /// The Radon–Nikodým operator `T_F` for a subspace `F ⊇ R(T)`, given as a
    /// refinement of `T`'s partition. It keeps the ambient weights, satisfies
    /// `T T_F = T = T_F T`, and `T P f = T P T_F f` for every band projection
    /// `P` with `Pe ∈ F`.
    pub fn radon_nikodym(&self, subspace: &Partition) -> Result<Self> {
        if subspace.atom_count() != self.space.atom_count() || !subspace.refines(&self.partition) {
            return Err(Error::NotRefinement);
        }
        Self::new(&self.space, subspace.clone())
    }

    /// Whether `T_F` obeys `T P f = T P T_F f` for every band projection that
    /// is a union of `F`-blocks. Enumerates `2^r` unions; intended for small `r`.
    pub fn radon_nikodym_characterization(&self, t_f: &CondExp<S>, f: &Element<S>) -> Result<bool> {
        if t_f.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        let blocks = t_f.partition.block_count();
        if blocks > 20 {
            return Err(Error::InvalidParameter(format!("{blocks} blocks is too many to enumerate")));
        }
        let tf_f = t_f.apply(f)?;
        for subset in 0u32..(1u32 << blocks) {
            let p = BandProjection::from_predicate(&self.space, |a| (subset >> t_f.partition.block_of(a)) & 1 == 1);
            let lhs = self.apply(&p.apply(f)?)?;
            let rhs = self.apply(&p.apply(&tf_f)?)?;
            if !lhs.approx_eq(&rhs)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Averaging property: `T(fg) = g·Tf` for `g ∈ R(T)`.
    pub fn check_averaging(&self, f: &Element<S>, g: &Element<S>) -> Result<Check<S>> {
        self.check_space(f)?;
        self.require_in_range(g)?;
        let lhs = self.apply(&f.multiply(g)?)?;
        let rhs = g.multiply(&self.apply(f)?)?;
        Check::equality(lhs, rhs)
    }

    /// `TS = T = ST`, tested on the atom indicators (a basis).
    pub fn satisfies_tower(&self, other: &CondExp<S>) -> Result<bool> {
        if other.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        for atom in 0..self.space.atom_count() {
            let x = self.space.atom_indicator(atom);
            let tx = self.apply(&x)?;
            if !self.apply(&other.apply(&x)?)?.approx_eq(&tx)? || !other.apply(&tx)?.approx_eq(&tx)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conditional Jensen: `(S|f|)² ≤ S(f²)` componentwise.
    pub fn conditional_jensen(&self, f: &Element<S>) -> Result<Check<S>> {
        let s_abs = self.apply(&f.abs())?;
        let lhs = s_abs.multiply(&s_abs)?;
        let rhs = self.apply(&f.multiply(f)?)?;
        Check::inequality(lhs, rhs)
    }

    /// Boolean form of [`CondExp::conditional_jensen`].
    pub fn conditional_jensen_check(&self, f: &Element<S>) -> Result<bool> {
        Ok(self.conditional_jensen(f)?.holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn ints(space: &Space<Rational>, v: &[i64]) -> Element<Rational> {
        space.element(v.iter().map(|&x| q(x, 1)).collect()).unwrap()
    }

    fn uniform(m: usize, labels: Vec<usize>) -> CondExp<Rational> {
        CondExp::new(&Space::uniform(m).unwrap(), Partition::new(labels).unwrap()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let t = uniform(2, vec![0, 0]);
        let e = t.space().unit();
        assert_eq!(t.apply(&e).unwrap(), e);
        let x = ints(t.space(), &[0, 1]);
        assert_eq!(t.apply(&x).unwrap(), t.space().constant(q(1, 2)));
        let id = CondExp::identity(t.space());
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn weighted_block_average() {
        let space = Space::new(vec![q(1, 1), q(3, 1), q(2, 1)]).unwrap();
        let t = CondExp::new(&space, Partition::new(vec![0, 0, 1]).unwrap()).unwrap();
        let x = ints(&space, &[4, 8, 5]);
        // (1·4 + 3·8) / 4 = 7
        assert_eq!(t.apply(&x).unwrap(), ints(&space, &[7, 7, 5]));
        assert_eq!(t.block_weights(), &[q(4, 1), q(2, 1)]);
    }

    #[test]
    fn range_membership() {
        let t = uniform(2, vec![0, 0]);
        let x = ints(t.space(), &[0, 1]);
        assert!(t.is_in_range(&t.space().unit()));
        assert!(t.is_in_range(&t.apply(&x).unwrap()));
        assert!(!t.is_in_range(&x));
    }

    #[test]
    fn space_mismatch() {
        let t = uniform(2, vec![0, 0]);
        let other = Space::<Rational>::uniform(3).unwrap();
        assert_eq!(t.apply(&other.unit()).unwrap_err(), Error::SpaceMismatch);
        assert!(CondExp::new(&other, Partition::discrete(2)).is_err());
    }

    #[test]
    fn radon_nikodym_examples() {
        let t = uniform(4, vec![0, 0, 0, 0]);
        assert_eq!(t.radon_nikodym(t.partition()).unwrap(), t);
        assert_eq!(t.radon_nikodym(&Partition::discrete(4)).unwrap(), CondExp::identity(t.space()));

        let f_part = Partition::new(vec![0, 0, 1, 1]).unwrap();
        let t_f = t.radon_nikodym(&f_part).unwrap();
        let f = ints(t.space(), &[1, 3, 5, 7]);
        assert_eq!(t_f.apply(&f).unwrap(), ints(t.space(), &[2, 2, 6, 6]));
        let p = BandProjection::from_mask(t.space(), vec![true, true, false, false]).unwrap();
        let lhs = t.apply(&p.apply(&f).unwrap()).unwrap();
        let rhs = t.apply(&p.apply(&t_f.apply(&f).unwrap()).unwrap()).unwrap();
        assert_eq!(lhs, t.space().unit());
        assert_eq!(rhs, t.space().unit());
        assert!(t.radon_nikodym_characterization(&t_f, &f).unwrap());
        assert!(t.satisfies_tower(&t_f).unwrap());
    }

    #[test]
    fn radon_nikodym_rejects_non_refinement() {
        let t = uniform(4, vec![0, 0, 1, 1]);
        let crossing = Partition::new(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(t.radon_nikodym(&crossing).unwrap_err(), Error::NotRefinement);
    }

    #[test]
    fn wrong_subspace_fails_characterization() {
        // An operator whose range is not F's refinement of T breaks TPf = TPT_F f.
        let t = uniform(4, vec![0, 0, 1, 1]);
        let crossing = CondExp::new(t.space(), Partition::new(vec![0, 1, 0, 1]).unwrap()).unwrap();
        let f = ints(t.space(), &[1, 0, 0, 0]);
        assert!(!t.radon_nikodym_characterization(&crossing, &f).unwrap());
    }

    #[test]
    fn averaging_examples() {
        let t = uniform(2, vec![0, 0]);
        let f = ints(t.space(), &[0, 1]);
        let c = t.check_averaging(&f, &t.space().unit()).unwrap();
        assert!(c.holds);
        let c = t.check_averaging(&f, &t.space().constant(q(3, 1))).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, t.space().constant(q(3, 2)));

        let t = uniform(3, vec![0, 0, 1]);
        let f = ints(t.space(), &[1, 2, 5]);
        let g = ints(t.space(), &[4, 4, 7]);
        let c = t.check_averaging(&f, &g).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, ints(t.space(), &[6, 6, 35]));
        assert_eq!(t.apply(&f).unwrap(), t.space().element(vec![q(3, 2), q(3, 2), q(5, 1)]).unwrap());

        let not_in_range = ints(t.space(), &[1, 2, 3]);
        assert_eq!(t.check_averaging(&f, &not_in_range).unwrap_err(), Error::NotInRange);
    }

    #[test]
    fn commutation_examples() {
        let t = uniform(4, vec![0, 0, 1, 1]);
        assert!(t.satisfies_tower(&t).unwrap());
        assert!(t.satisfies_tower(&CondExp::identity(t.space())).unwrap());
        let s = CondExp::new(t.space(), Partition::new(vec![0, 1, 0, 1]).unwrap()).unwrap();
        // T S e_0 = (1/4, 1/4, 1/4, 1/4) but T e_0 = (1/2, 1/2, 0, 0).
        let e0 = t.space().atom_indicator(0);
        assert_eq!(t.apply(&s.apply(&e0).unwrap()).unwrap(), t.space().constant(q(1, 4)));
        assert!(!t.satisfies_tower(&s).unwrap());
    }

    #[test]
    fn jensen_examples() {
        let s = uniform(2, vec![0, 0]);
        let f = ints(s.space(), &[0, 1]);
        let c = s.conditional_jensen(&f).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, s.space().constant(q(1, 4)));
        assert_eq!(c.rhs, s.space().constant(q(1, 2)));
        let c = s.conditional_jensen(&s.space().unit()).unwrap();
        assert_eq!(c.lhs, c.rhs);
        let in_range = s.space().constant(q(-3, 1));
        let c = s.conditional_jensen(&in_range).unwrap();
        assert_eq!(c.lhs, c.rhs);
    }
}
