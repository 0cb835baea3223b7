//! Partitions of the atom set.
//!
//! The order-closed Riesz subspaces of the atom model that contain `e` are
//! exactly the block-constant elements of some partition; refinement of
//! partitions is inclusion of subspaces.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::Element;

/// A partition of `0..atom_count` into nonempty blocks, numbered by first
/// occurrence. Two partitions are equal iff they have the same blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary block labels; labels are renumbered
    /// `0..r` in order of first occurrence.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut relabel = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let block_of = labels
            .iter()
            .enumerate()
            .map(|(atom, label)| {
                let next = relabel.len();
                let b = *relabel.entry(*label).or_insert(next);
                if b == blocks.len() {
                    blocks.push(Vec::new());
                }
                blocks[b].push(atom);
                b
            })
            .collect();
        Ok(Self { block_of, blocks })
    }

    /// Every atom its own block (range = the whole space).
    pub fn discrete(atoms: usize) -> Self {
        Self::new((0..atoms).collect()).expect("at least one atom")
    }

    /// One block (range = multiples of `e`).
    pub fn single_block(atoms: usize) -> Self {
        Self::new(vec![0; atoms]).expect("at least one atom")
    }

    pub fn atom_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.atom_count() != coarser.atom_count() {
            return false;
        }
        self.blocks.iter().all(|block| {
            let target = coarser.block_of[block[0]];
            block.iter().all(|&a| coarser.block_of[a] == target)
        })
    }

    /// The coarsest common refinement (blocks are nonempty intersections).
    /// Its block-constant elements form the subspace generated by both.
    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        if self.atom_count() != other.atom_count() {
            return Err(Error::LengthMismatch { expected: self.atom_count(), found: other.atom_count() });
        }
        let pairs: Vec<(usize, usize)> =
            (0..self.atom_count()).map(|a| (self.block_of[a], other.block_of[a])).collect();
        let mut ids = HashMap::new();
        let labels = pairs
            .into_iter()
            .map(|p| {
                let next = ids.len();
                *ids.entry(p).or_insert(next)
            })
            .collect();
        Partition::new(labels)
    }

    /// The coarsest refinement of `self` on which `x` is block-constant.
    pub fn refine_by<S: Scalar>(&self, x: &Element<S>) -> Result<Partition> {
        if x.space().atom_count() != self.atom_count() {
            return Err(Error::LengthMismatch { expected: self.atom_count(), found: x.space().atom_count() });
        }
        // Per block, a short list of distinct values seen so far.
        let mut groups: Vec<Vec<(S, usize)>> = vec![Vec::new(); self.block_count()];
        let mut next = 0usize;
        let labels = (0..self.atom_count())
            .map(|a| {
                let seen = &mut groups[self.block_of[a]];
                let v = x.coord(a);
                match seen.iter().find(|(u, _)| u == v) {
                    Some((_, id)) => *id,
                    None => {
                        seen.push((v.clone(), next));
                        next += 1;
                        next - 1
                    }
                }
            })
            .collect();
        Partition::new(labels)
    }

    /// Whether `x` is constant on every block (exact for rationals, within
    /// tolerance for floats).
    pub fn is_constant_on_blocks<S: Scalar>(&self, x: &Element<S>) -> bool {
        x.space().atom_count() == self.atom_count()
            && self.blocks.iter().all(|block| {
                let first = x.coord(block[0]);
                block.iter().all(|&a| x.coord(a).approx_eq(first))
            })
    }
}
