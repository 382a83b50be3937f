//! Exact integer arithmetic in the prime field GF(2^61 - 1) and derivation
//! of the constant schedule that drives pattern construction and the
//! message-passing rounds.
//!
//! Every message value lives in this field, so iterating the update rules
//! any number of times stays exact and fixed-width. The schedule packs all
//! constants one matching run needs: one `alpha` per cell, the probe value
//! `beta`, four scalars per round, and one `gamma` per matched pair. All of
//! them are pairwise distinct and nonzero, enforced by generate-and-reject
//! against a seen set.

use std::collections::HashSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::Serialize;

use crate::rng::CounterRng;

/// Field modulus: the Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// An element of the integer field modulo 2^61 - 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Reduce an arbitrary `u64` into the field using 2^61 ≡ 1 (mod P).
    #[inline]
    pub fn new(value: u64) -> Self {
        let sum = (value & MODULUS) + (value >> 61);
        FieldElement(if sum >= MODULUS { sum - MODULUS } else { sum })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        let sum = self.0 + rhs.0;
        FieldElement(if sum >= MODULUS { sum - MODULUS } else { sum })
    }
}

impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        if self.0 >= rhs.0 {
            FieldElement(self.0 - rhs.0)
        } else {
            FieldElement(MODULUS - rhs.0 + self.0)
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        let product = self.0 as u128 * rhs.0 as u128;
        let lo = (product & MODULUS as u128) as u64;
        let hi = (product >> 61) as u64;
        FieldElement::new(lo + hi)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> FieldElement {
        if self.0 == 0 {
            self
        } else {
            FieldElement(MODULUS - self.0)
        }
    }
}

impl Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> FieldElement {
        iter.fold(FieldElement::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The four scalars applied in one message-passing round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundScalars {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

/// All constants one matching run needs, derived deterministically from a
/// seed. Both graphs in a comparison share a single schedule, which is what
/// makes matched and probed entries carry equal values on the two sides.
#[derive(Debug, Clone)]
pub struct ConstantSchedule {
    seed: u64,
    alphas: Vec<FieldElement>,
    beta: FieldElement,
    rounds: Vec<RoundScalars>,
    gammas: Vec<FieldElement>,
}

impl ConstantSchedule {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Cell-default value for the `r`-th cell.
    pub fn alpha(&self, cell: usize) -> FieldElement {
        self.alphas[cell]
    }

    pub fn num_alphas(&self) -> usize {
        self.alphas.len()
    }

    /// Probe value, distinct from every alpha and gamma and nonzero.
    pub fn beta(&self) -> FieldElement {
        self.beta
    }

    /// Scalars for round `l` (zero-based).
    pub fn round_scalars(&self, l: usize) -> RoundScalars {
        self.rounds[l]
    }

    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Shared value for the matched pair with ordinal key `key`. Stable for
    /// the lifetime of the schedule, so a pattern rebuilt after new matches
    /// reuses the same value for old pairs.
    pub fn gamma(&self, key: usize) -> FieldElement {
        self.gammas[key]
    }

    pub fn max_pairs(&self) -> usize {
        self.gammas.len()
    }

    /// Every constant in the schedule, for distinctness checks.
    pub fn all_constants(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(
            self.alphas.len() + 1 + 4 * self.rounds.len() + self.gammas.len(),
        );
        out.extend_from_slice(&self.alphas);
        out.push(self.beta);
        for r in &self.rounds {
            out.extend_from_slice(&[r.a, r.b, r.c, r.d]);
        }
        out.extend_from_slice(&self.gammas);
        out
    }
}

fn draw_distinct(rng: &mut CounterRng, seen: &mut HashSet<u64>) -> FieldElement {
    loop {
        let v = FieldElement::new(rng.next_u64());
        if !v.is_zero() && seen.insert(v.value()) {
            return v;
        }
    }
}

/// Derive the full constant schedule for a run: `num_cells` alphas, one
/// beta, `max_iterations` scalar quadruples, and `max_pairs` gammas, all
/// pairwise distinct and nonzero. Deterministic in the seed.
pub fn derive_constants(
    seed: u64,
    num_cells: usize,
    max_iterations: usize,
    max_pairs: usize,
) -> ConstantSchedule {
    let mut rng = CounterRng::new(seed);
    let mut seen = HashSet::new();
    let alphas: Vec<_> = (0..num_cells)
        .map(|_| draw_distinct(&mut rng, &mut seen))
        .collect();
    let beta = draw_distinct(&mut rng, &mut seen);
    let rounds: Vec<_> = (0..max_iterations)
        .map(|_| RoundScalars {
            a: draw_distinct(&mut rng, &mut seen),
            b: draw_distinct(&mut rng, &mut seen),
            c: draw_distinct(&mut rng, &mut seen),
            d: draw_distinct(&mut rng, &mut seen),
        })
        .collect();
    let gammas: Vec<_> = (0..max_pairs)
        .map(|_| draw_distinct(&mut rng, &mut seen))
        .collect();
    debug_assert_eq!(
        seen.len(),
        num_cells + 1 + 4 * max_iterations + max_pairs,
        "schedule constants must be pairwise distinct"
    );
    ConstantSchedule {
        seed,
        alphas,
        beta,
        rounds,
        gammas,
    }
}
