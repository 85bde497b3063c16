//! Bijections on `k`-bit basis labels.
//!
//! A [`Permutation`] is stored as a pair of lookup tables so that both the
//! forward map and its inverse are O(1). Catalog constructors carry canonical
//! names which the circuit text format uses to rebuild them on parse.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{gcd, mod_pow};

/// Largest register a permutation table may cover.
pub const MAX_PERMUTATION_BITS: usize = 24;

/// Registers up to this size are checked exhaustively; larger ones by probing.
const EXHAUSTIVE_CHECK_BITS: usize = 20;
const PROBE_COUNT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("permutation `{name}`: register of {bits} bits exceeds the {MAX_PERMUTATION_BITS}-bit limit")]
    TooWide { name: String, bits: usize },
    #[error("permutation `{name}`: label {image} is the image of both {first} and {second}")]
    NotBijective {
        name: String,
        image: usize,
        first: usize,
        second: usize,
    },
    #[error("permutation `{name}`: label {label} maps outside the {bits}-bit range")]
    OutOfRange {
        name: String,
        label: usize,
        bits: usize,
    },
    #[error("MODMUL {g} {modulus}: generator is not a unit")]
    NotUnit { g: u64, modulus: u64 },
    #[error("MODMUL {g} {modulus}: modulus needs more than {bits} register bits")]
    ModulusTooLarge { g: u64, modulus: u64, bits: usize },
    #[error("XORCONST {k}: constant does not fit in {bits} bits")]
    ConstantTooWide { k: u64, bits: usize },
}

#[derive(Clone)]
pub struct Permutation {
    name: String,
    bits: usize,
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation by tabulating `f` on all `2^bits` labels and
    /// rejecting it unless it is a bijection.
    pub fn from_fn(
        name: impl Into<String>,
        bits: usize,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self, PermutationError> {
        let name = name.into();
        if bits > MAX_PERMUTATION_BITS {
            return Err(PermutationError::TooWide { name, bits });
        }
        let size = 1usize << bits;
        let mut forward = Vec::with_capacity(size);
        for label in 0..size {
            let image = f(label);
            if image >= size {
                return Err(PermutationError::OutOfRange { name, label, bits });
            }
            forward.push(image as u32);
        }
        Self::from_table(name, bits, forward)
    }

    pub fn from_table(
        name: impl Into<String>,
        bits: usize,
        forward: Vec<u32>,
    ) -> Result<Self, PermutationError> {
        let name = name.into();
        if bits > MAX_PERMUTATION_BITS {
            return Err(PermutationError::TooWide { name, bits });
        }
        let size = 1usize << bits;
        assert_eq!(forward.len(), size, "table length must be 2^bits");
        let mut inverse = vec![u32::MAX; size];
        for (label, &image) in forward.iter().enumerate() {
            let image = image as usize;
            if image >= size {
                return Err(PermutationError::OutOfRange { name, label, bits });
            }
            if inverse[image] != u32::MAX {
                return Err(PermutationError::NotBijective {
                    name,
                    image,
                    first: inverse[image] as usize,
                    second: label,
                });
            }
            inverse[image] = label as u32;
        }
        Ok(Self {
            name,
            bits,
            forward,
            inverse,
        })
    }

    pub fn identity(bits: usize) -> Self {
        Self::from_fn("IDENTITY", bits, |z| z).expect("identity is a bijection")
    }

    /// `z ↦ z ⊕ k`.
    pub fn xor_const(bits: usize, k: u64) -> Result<Self, PermutationError> {
        if bits < 64 && k >> bits != 0 {
            return Err(PermutationError::ConstantTooWide { k, bits });
        }
        Self::from_fn(format!("XORCONST {k}"), bits, |z| z ^ k as usize)
    }

    /// Multiplication by `g` modulo `modulus` on the units below `modulus`;
    /// every other label (zero, non-units, labels `>= modulus`) is fixed.
    pub fn modmul(bits: usize, g: u64, modulus: u64) -> Result<Self, PermutationError> {
        if modulus < 2 || gcd(g % modulus, modulus) != 1 {
            return Err(PermutationError::NotUnit { g, modulus });
        }
        if bits < 64 && modulus > (1u64 << bits) {
            return Err(PermutationError::ModulusTooLarge { g, modulus, bits });
        }
        let g = g % modulus;
        Self::from_fn(format!("MODMUL {g} {modulus}"), bits, |z| {
            let x = z as u64;
            if x >= 1 && x < modulus && gcd(x, modulus) == 1 {
                ((x as u128 * g as u128) % modulus as u128) as usize
            } else {
                z
            }
        })
    }

    /// Same map as `modmul(bits, g^power mod modulus, modulus)`.
    pub fn modmul_power(
        bits: usize,
        g: u64,
        modulus: u64,
        power: u64,
    ) -> Result<Self, PermutationError> {
        if modulus < 2 || gcd(g % modulus, modulus) != 1 {
            return Err(PermutationError::NotUnit { g, modulus });
        }
        Self::modmul(bits, mod_pow(g, power, modulus), modulus)
    }

    /// Flips the top register bit exactly when every lower bit is zero.
    ///
    /// With the top wire holding `|−⟩` this is a phase flip about `|0…0⟩` on
    /// the remaining wires.
    pub fn flip_zero(bits: usize) -> Self {
        assert!(bits >= 1, "FLIPZERO needs at least one bit");
        let top = 1usize << (bits - 1);
        Self::from_fn("FLIPZERO", bits, |z| {
            if z & (top - 1) == 0 {
                z ^ top
            } else {
                z
            }
        })
        .expect("FLIPZERO is an involution")
    }

    /// Uniformly random permutation drawn from a seeded generator.
    pub fn random(bits: usize, seed: u64) -> Result<Self, PermutationError> {
        if bits > MAX_PERMUTATION_BITS {
            return Err(PermutationError::TooWide {
                name: format!("RANDOM {seed}"),
                bits,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table: Vec<u32> = (0..1u32 << bits).collect();
        table.shuffle(&mut rng);
        Self::from_table(format!("RANDOM {seed}"), bits, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    #[inline]
    pub fn apply(&self, label: usize) -> usize {
        self.forward[label] as usize
    }

    #[inline]
    pub fn apply_inverse(&self, label: usize) -> usize {
        self.inverse[label] as usize
    }

    pub fn forward_table(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse_permutation(&self) -> Self {
        Self {
            name: format!("{}^-1", self.name),
            bits: self.bits,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self` after `first`, i.e. `z ↦ self(first(z))`.
    pub fn compose_after(&self, first: &Permutation) -> Self {
        assert_eq!(self.bits, first.bits);
        let forward = first
            .forward
            .iter()
            .map(|&z| self.forward[z as usize])
            .collect();
        Self::from_table(format!("{}*{}", self.name, first.name), self.bits, forward)
            .expect("composition of bijections is a bijection")
    }

    pub fn is_identity(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(z, &y)| z == y as usize)
    }

    /// Checks `forward ∘ inverse = id`: exhaustively up to 20 bits, by random
    /// probing above that.
    pub fn check_inverse(&self) -> bool {
        if self.bits <= EXHAUSTIVE_CHECK_BITS {
            (0..self.size()).all(|z| self.apply(self.apply_inverse(z)) == z)
        } else {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..PROBE_COUNT).all(|_| {
                let z = rng.random_range(0..self.size());
                self.apply(self.apply_inverse(z)) == z && self.apply_inverse(self.apply(z)) == z
            })
        }
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.bits == other.bits && self.forward == other.forward
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Permutation")
            .field("name", &self.name)
            .field("bits", &self.bits)
            .finish()
    }
}
