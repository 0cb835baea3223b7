//! Seeded generators of small exact instances for randomized suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::conditional::CondExp;
use crate::independence::Extension;
use crate::partition::Partition;
use crate::scalar::{Rational, Scalar};
use crate::space::{Element, Space};

/// `a / b` with `a ∈ [-max_num, max_num]`, `b ∈ [1, max_den]`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    Rational::ratio(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// A nonnegative rational with the same ranges.
pub fn nonnegative_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    Rational::ratio(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

/// A probability `a / b` with `b ≤ max_den`.
pub fn probability<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    Rational::ratio(rng.gen_range(0..=den), den)
}

/// `1..=max_atoms` atoms with weights `a / b`, `a ∈ [1, 6]`, `b ∈ [1, 4]`.
pub fn space<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> Space<Rational> {
    let m = rng.gen_range(1..=max_atoms);
    let weights = (0..m).map(|_| Rational::ratio(rng.gen_range(1..=6), rng.gen_range(1..=4))).collect();
    Space::new(weights).expect("positive weights")
}

/// A partition of `atoms` into at most `max_blocks` nonempty blocks.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, atoms: usize, max_blocks: usize) -> Partition {
    let r = rng.gen_range(1..=max_blocks.min(atoms).max(1));
    // first r atoms (after shuffling) seed the blocks so none is empty
    let mut order: Vec<usize> = (0..atoms).collect();
    order.shuffle(rng);
    let mut labels = vec![0; atoms];
    for (pos, &atom) in order.iter().enumerate() {
        labels[atom] = if pos < r { pos } else { rng.gen_range(0..r) };
    }
    Partition::new(labels).expect("nonempty")
}

/// A random refinement of `coarse`: each block is split into up to
/// `max_parts` pieces.
pub fn refinement<R: Rng + ?Sized>(rng: &mut R, coarse: &Partition, max_parts: usize) -> Partition {
    let mut labels = vec![0; coarse.atom_count()];
    let mut next = 0;
    for block in coarse.blocks() {
        let sub = partition(rng, block.len(), max_parts);
        for (i, &atom) in block.iter().enumerate() {
            labels[atom] = next + sub.block_of(i);
        }
        next += sub.block_count();
    }
    Partition::new(labels).expect("nonempty")
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, space: &Space<Rational>) -> Element<Rational> {
    space.element_from_fn(|_| rational(rng, 9, 5))
}

pub fn nonnegative_element<R: Rng + ?Sized>(rng: &mut R, space: &Space<Rational>) -> Element<Rational> {
    space.element_from_fn(|_| nonnegative_rational(rng, 9, 4))
}

/// A random element of `R(T)`.
pub fn block_constant<R: Rng + ?Sized>(rng: &mut R, t: &CondExp<Rational>) -> Element<Rational> {
    let values: Vec<_> = (0..t.partition().block_count()).map(|_| rational(rng, 9, 5)).collect();
    t.from_block_values(&values).expect("one value per block")
}

/// A random element of `R(T)` with values in `[0, 1]`.
pub fn block_probability<R: Rng + ?Sized>(rng: &mut R, t: &CondExp<Rational>, max_den: i64) -> Element<Rational> {
    let values: Vec<_> = (0..t.partition().block_count()).map(|_| probability(rng, max_den)).collect();
    t.from_block_values(&values).expect("one value per block")
}

/// A random conditional expectation on a fresh space.
pub fn cond_exp<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize, max_blocks: usize) -> CondExp<Rational> {
    let s = space(rng, max_atoms);
    let p = partition(rng, s.atom_count(), max_blocks);
    CondExp::new(&s, p).expect("matching size")
}

/// A conditional expectation with exactly `blocks` single-atom blocks and
/// uniform weights, carrying the given success probabilities.
pub fn block_base(probabilities: &[Rational]) -> (Space<Rational>, CondExp<Rational>, Element<Rational>) {
    let s = Space::uniform(probabilities.len()).expect("at least one block");
    let t = CondExp::identity(&s);
    let f = s.element(probabilities.to_vec()).expect("one per atom");
    (s, t, f)
}

/// A base for a Bernoulli process: up to `max_atoms` atoms, up to
/// `max_blocks` `T`-blocks, and a block-constant success element.
pub fn process_base<R: Rng + ?Sized>(
    rng: &mut R,
    max_atoms: usize,
    max_blocks: usize,
    max_den: i64,
) -> (Space<Rational>, CondExp<Rational>, Element<Rational>) {
    let t = cond_exp(rng, max_atoms, max_blocks);
    let f = block_probability(rng, &t, max_den);
    (t.space().clone(), t, f)
}

/// `lift(a)·P_k e + lift(c)` with random `a, c ∈ R(T)`: an element of the
/// factor subspace of event `k`.
pub fn factor_element<R: Rng + ?Sized>(
    rng: &mut R,
    t: &CondExp<Rational>,
    ext: &Extension<Rational>,
    k: usize,
) -> Element<Rational> {
    let a = ext.lift(&block_constant(rng, t)).expect("base element");
    let c = ext.lift(&block_constant(rng, t)).expect("base element");
    a.multiply(&ext.projections[k].indicator()).expect("same space").add(&c).expect("same space")
}

/// Converts an exact element to the approximate regime.
pub fn to_float(x: &Element<Rational>) -> Element<f64> {
    let space = Space::new(x.space().weights().iter().map(Scalar::to_f64).collect()).expect("positive weights");
    space.element(x.coords().iter().map(Scalar::to_f64).collect()).expect("same length")
}
