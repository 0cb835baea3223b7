use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Element, Space};

/// A band projection of the atom model: keeps the coordinates of a set of
/// atoms and zeroes the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct BandProjection<S> {
    space: Space<S>,
    mask: Vec<bool>,
}

impl<S: Scalar> BandProjection<S> {
    pub fn from_mask(space: &Space<S>, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != space.atom_count() {
            return Err(Error::LengthMismatch { expected: space.atom_count(), found: mask.len() });
        }
        Ok(Self { space: space.clone(), mask })
    }

    pub fn from_predicate(space: &Space<S>, mut keep: impl FnMut(usize) -> bool) -> Self {
        Self { space: space.clone(), mask: (0..space.atom_count()).map(&mut keep).collect() }
    }

    /// The identity `I`.
    pub fn full(space: &Space<S>) -> Self {
        Self::from_predicate(space, |_| true)
    }

    pub fn empty(space: &Space<S>) -> Self {
        Self::from_predicate(space, |_| false)
    }

    /// Projection onto the band generated by `u ≥ 0`: the support of `u`.
    ///
    /// Approximate spaces treat coordinates `≤ 1e-12` as zero.
    pub fn generated_by(u: &Element<S>) -> Result<Self> {
        u.require_nonnegative()?;
        Ok(Self::from_predicate(u.space(), |i| u.coord(i).is_support()))
    }

    pub fn space(&self) -> &Space<S> {
        &self.space
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.mask[atom]
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    fn check_space(&self, space: &Space<S>) -> Result<()> {
        if self.space == *space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn apply(&self, x: &Element<S>) -> Result<Element<S>> {
        self.check_space(x.space())?;
        Ok(x.space().element_from_fn(|i| if self.mask[i] { x.coord(i).clone() } else { S::zero() }))
    }

    /// `Pe`, the indicator of the band.
    pub fn indicator(&self) -> Element<S> {
        self.space.element_from_fn(|i| if self.mask[i] { S::one() } else { S::zero() })
    }

    /// `PQ`: intersection of the bands.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        Ok(Self::from_predicate(&self.space, |i| self.mask[i] && other.mask[i]))
    }

    /// `I - P`
    pub fn complement(&self) -> Self {
        Self::from_predicate(&self.space, |i| !self.mask[i])
    }

    /// `P + Q - PQ`: the band generated by both.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_space(&other.space)?;
        Ok(Self::from_predicate(&self.space, |i| self.mask[i] || other.mask[i]))
    }

    /// `PQ = 0`
    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        self.check_space(&other.space)?;
        Ok(!self.mask.iter().zip(&other.mask).any(|(a, b)| *a && *b))
    }
}
