//! JSON forms of spaces, elements, partitions and process descriptors.
//!
//! Exact scalars are written as `"num/den"` strings, approximate ones as
//! numbers; see [`ScalarRepr`].

use serde::{Deserialize, Serialize};

use crate::bernoulli::{BernoulliProcess, Representation};
use crate::conditional::CondExp;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{Scalar, ScalarRepr};
use crate::space::{Element, Space};

pub(crate) fn coords_repr<S: Scalar>(x: &Element<S>) -> Vec<ScalarRepr> {
    x.coords().iter().map(Scalar::encode).collect()
}

fn decode_all<S: Scalar>(values: &[ScalarRepr]) -> Result<Vec<S>> {
    values.iter().map(S::decode).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceRepr {
    pub atoms: usize,
    pub weights: Vec<ScalarRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl SpaceRepr {
    pub fn from_space<S: Scalar>(space: &Space<S>) -> Self {
        Self {
            atoms: space.atom_count(),
            weights: space.weights().iter().map(Scalar::encode).collect(),
            labels: space.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_space<S: Scalar>(&self) -> Result<Space<S>> {
        if self.weights.len() != self.atoms {
            return Err(Error::LengthMismatch { expected: self.atoms, found: self.weights.len() });
        }
        let weights = decode_all(&self.weights)?;
        match &self.labels {
            Some(labels) => Space::with_labels(weights, labels.clone()),
            None => Space::new(weights),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementRepr {
    pub coords: Vec<ScalarRepr>,
}

impl ElementRepr {
    pub fn from_element<S: Scalar>(x: &Element<S>) -> Self {
        Self { coords: coords_repr(x) }
    }

    pub fn to_element<S: Scalar>(&self, space: &Space<S>) -> Result<Element<S>> {
        space.element(decode_all(&self.coords)?)
    }
}

/// A partition, or equivalently the conditional expectation it induces on a
/// given space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRepr {
    pub block_of: Vec<usize>,
}

impl PartitionRepr {
    pub fn from_partition(p: &Partition) -> Self {
        Self { block_of: p.labels().to_vec() }
    }

    pub fn from_cond<S: Scalar>(t: &CondExp<S>) -> Self {
        Self::from_partition(t.partition())
    }

    pub fn to_partition(&self) -> Result<Partition> {
        Partition::new(self.block_of.clone())
    }

    pub fn to_cond<S: Scalar>(&self, space: &Space<S>) -> Result<CondExp<S>> {
        CondExp::new(space, self.to_partition()?)
    }
}

/// Everything needed to rebuild a [`BernoulliProcess`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessDescriptor {
    pub space: SpaceRepr,
    pub partition: PartitionRepr,
    /// Success element, one coordinate per atom.
    pub f: Vec<ScalarRepr>,
    pub n: usize,
    pub representation: Representation,
}

impl ProcessDescriptor {
    pub fn from_process<S: Scalar>(p: &BernoulliProcess<S>) -> Self {
        Self {
            space: SpaceRepr::from_space(p.base()),
            partition: PartitionRepr::from_cond(p.cond()),
            f: coords_repr(p.f()),
            n: p.n(),
            representation: p.representation(),
        }
    }

    pub fn build<S: Scalar>(&self) -> Result<BernoulliProcess<S>> {
        let space = self.space.to_space::<S>()?;
        let cond = self.partition.to_cond(&space)?;
        let f = space.element(decode_all(&self.f)?)?;
        BernoulliProcess::new(&space, &cond, &f, self.n, self.representation)
    }
}
