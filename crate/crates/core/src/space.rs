//! The atom model of a Dedekind complete Riesz space with weak order unit.
//!
//! A [`Space`] is a finite set of atoms carrying strictly positive weights;
//! its elements are scalar functions on the atoms. Order, lattice operations
//! and the f-algebra product are all componentwise, and the weak order unit
//! `e` is the all-ones element.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug)]
struct SpaceData<S> {
    weights: Vec<S>,
    labels: Option<Vec<String>>,
}

/// A finite sample space with strictly positive atom weights.
///
/// Cloning is cheap; clones compare equal to the original.
#[derive(Debug)]
pub struct Space<S> {
    data: Arc<SpaceData<S>>,
}

impl<S> Clone for Space<S> {
    fn clone(&self) -> Self {
        Self { data: Arc::clone(&self.data) }
    }
}

impl<S: PartialEq> PartialEq for Space<S> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.weights == other.data.weights && self.data.labels == other.data.labels)
    }
}

impl<S: Scalar> Space<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        Self::build(weights, None)
    }

    pub fn with_labels(weights: Vec<S>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: weights.len(), found: labels.len() });
        }
        Self::build(weights, Some(labels))
    }

    /// `m` atoms of weight one.
    pub fn uniform(atoms: usize) -> Result<Self> {
        Self::new(vec![S::one(); atoms])
    }

    fn build(weights: Vec<S>, labels: Option<Vec<String>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some(atom) = weights.iter().position(|w| *w <= S::zero()) {
            return Err(Error::NonPositiveWeight { atom });
        }
        Ok(Self { data: Arc::new(SpaceData { weights, labels }) })
    }

    pub fn atom_count(&self) -> usize {
        self.data.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.data.weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.data.labels.as_deref()
    }

    pub fn total_weight(&self) -> S {
        self.data.weights.iter().fold(S::zero(), |acc, w| acc + w.clone())
    }

    /// The weak order unit `e = (1, ..., 1)`.
    pub fn unit(&self) -> Element<S> {
        self.constant(S::one())
    }

    pub fn zero(&self) -> Element<S> {
        self.constant(S::zero())
    }

    pub fn constant(&self, value: S) -> Element<S> {
        Element { space: self.clone(), coords: vec![value; self.atom_count()] }
    }

    pub fn element(&self, coords: Vec<S>) -> Result<Element<S>> {
        if coords.len() != self.atom_count() {
            return Err(Error::LengthMismatch { expected: self.atom_count(), found: coords.len() });
        }
        Ok(Element { space: self.clone(), coords })
    }

    pub fn element_from_fn(&self, f: impl FnMut(usize) -> S) -> Element<S> {
        Element { space: self.clone(), coords: (0..self.atom_count()).map(f).collect() }
    }

    /// Indicator of a single atom.
    pub fn atom_indicator(&self, atom: usize) -> Element<S> {
        self.element_from_fn(|i| if i == atom { S::one() } else { S::zero() })
    }
}

/// Lattice operation selector for [`Element::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Join,
    Meet,
}

/// A vector of scalars indexed by the atoms of a [`Space`].
#[derive(Debug, Clone, PartialEq)]
pub struct Element<S> {
    space: Space<S>,
    coords: Vec<S>,
}

impl<S: Scalar> Element<S> {
    pub fn space(&self) -> &Space<S> {
        &self.space
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn coord(&self, atom: usize) -> &S {
        &self.coords[atom]
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn zip_with(&self, other: &Self, mut op: impl FnMut(&S, &S) -> S) -> Result<Self> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| op(a, b)).collect();
        Ok(Self { space: self.space.clone(), coords })
    }

    /// Componentwise map; the result lives in the same space.
    pub fn map(&self, op: impl FnMut(&S) -> S) -> Self {
        Self { space: self.space.clone(), coords: self.coords.iter().map(op).collect() }
    }

    pub fn combine(&self, other: &Self, op: LatticeOp) -> Result<Self> {
        match op {
            LatticeOp::Join => self.zip_with(other, |a, b| a.max_of(b)),
            LatticeOp::Meet => self.zip_with(other, |a, b| a.min_of(b)),
        }
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeOp::Join)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.combine(other, LatticeOp::Meet)
    }

    /// `x ∨ (-x)`
    pub fn abs(&self) -> Self {
        self.map(|a| a.abs())
    }

    /// `x⁺ = x ∨ 0`
    pub fn pos_part(&self) -> Self {
        self.map(|a| a.max_of(&S::zero()))
    }

    /// `x⁻ = (-x) ∨ 0`
    pub fn neg_part(&self) -> Self {
        self.map(|a| (-a.clone()).max_of(&S::zero()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        self.map(|a| a.clone() * factor.clone())
    }

    /// `self - c·e`
    pub fn sub_unit(&self, c: &S) -> Self {
        self.map(|a| a.clone() - c.clone())
    }

    /// The f-algebra product: componentwise, with unit `e`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    /// `self^k` in the f-algebra (`self^0 = e`).
    pub fn powi(&self, k: usize) -> Self {
        self.map(|a| a.powi(k))
    }

    /// `inf { λ ≥ 0 : |x| ≤ λe }`, the norm of e-uniform convergence.
    pub fn e_norm(&self) -> S {
        self.coords.iter().fold(S::zero(), |acc, a| acc.max_of(&a.abs()))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    /// Componentwise `self ≤ other` with the scalar's comparison slack.
    pub fn approx_le(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a.approx_le(b)))
    }

    /// Componentwise equality, exact or within the scalar's tolerance.
    pub fn approx_eq(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a.approx_eq(b)))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|a| *a >= S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|a| a.is_zero())
    }

    /// Errors with the first negative coordinate, if any.
    pub fn require_nonnegative(&self) -> Result<()> {
        match self.coords.iter().position(|a| *a < S::zero()) {
            Some(atom) => Err(Error::NegativeCoordinate { atom }),
            None => Ok(()),
        }
    }

    /// Errors unless `0 ≤ self ≤ e`.
    pub fn require_probability(&self) -> Result<()> {
        match self.coords.iter().position(|a| *a < S::zero() || *a > S::one()) {
            Some(atom) => Err(Error::InvalidProbability { atom }),
            None => Ok(()),
        }
    }

    /// `(e - g/n)^n` by repeated f-algebra multiplication.
    ///
    /// Converges e-uniformly to `exp(-g)` as `n` grows.
    pub fn exp_neg_limit(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("exp_neg_limit needs n >= 1".into()));
        }
        let inv_n = S::one() / S::from_i64(n as i64);
        let base = self.map(|g| S::one() - g.clone() * inv_n.clone());
        let mut acc = base.clone();
        for _ in 1..n {
            acc = acc.multiply(&base)?;
        }
        Ok(acc)
    }
}

/// A continuous real function with a closed interval domain, lifted to
/// elements by the functional calculus.
pub struct RealFunction<'a> {
    lo: f64,
    hi: f64,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
}

impl<'a> RealFunction<'a> {
    pub fn new(lo: f64, hi: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self { lo, hi, f: Box::new(f) }
    }

    /// Defined on the whole real line.
    pub fn everywhere(f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, f)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

impl fmt::Debug for RealFunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction").field("lo", &self.lo).field("hi", &self.hi).finish_non_exhaustive()
    }
}

impl Element<f64> {
    /// `phi(g)`. In the atom model the order-limit construction of the
    /// functional calculus is exactly componentwise evaluation.
    pub fn functional_calculus(&self, phi: &RealFunction<'_>) -> Result<Self> {
        if let Some((atom, &value)) = self.coords.iter().enumerate().find(|(_, v)| !(phi.lo..=phi.hi).contains(*v)) {
            return Err(Error::OutsideDomain { atom, value, lo: phi.lo, hi: phi.hi });
        }
        Ok(self.map(|&t| (phi.f)(t)))
    }

    /// `e^{-g}`.
    pub fn exp_neg(&self) -> Self {
        self.map(|&t| (-t).exp())
    }
}
