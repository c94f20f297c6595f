//! The coefficient group Γ ≅ Zᵏ together with its weighting homomorphism
//! φ: Γ → Q and Chern homomorphism c̄₁: Γ → Z.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: lattice has rank {expected}, element has {found} coordinates")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("phi has {phi} entries but c1 has {c1}")]
    RankMismatch { phi: usize, c1: usize },
}

/// An element of Γ in coordinates with respect to the chosen generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupElement(coords)
    }

    pub fn identity(rank: usize) -> Self {
        GroupElement(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        GroupElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        GroupElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    fn neg(self) -> GroupElement {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Minimal Chern number N: the positive generator of the image of c̄₁, or
/// `Unbounded` when c̄₁ vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChernNumber {
    Finite(u64),
    Unbounded,
}

impl ChernNumber {
    /// True iff N divides `value` (every integer is divisible by N = ∞ only if it is 0).
    pub fn divides(&self, value: i64) -> bool {
        match self {
            ChernNumber::Finite(n) => value.unsigned_abs() % n == 0,
            ChernNumber::Unbounded => value == 0,
        }
    }
}

impl fmt::Display for ChernNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChernNumber::Finite(n) => write!(f, "{n}"),
            ChernNumber::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Γ ≅ Zᵏ with the values of φ and c̄₁ on the generators.
///
/// φ is restricted to rational values so that weight comparisons are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    phi: Vec<BigRational>,
    c1: Vec<i64>,
}

impl Lattice {
    pub fn new(phi: Vec<BigRational>, c1: Vec<i64>) -> Result<Self, LatticeError> {
        if phi.len() != c1.len() {
            return Err(LatticeError::RankMismatch {
                phi: phi.len(),
                c1: c1.len(),
            });
        }
        Ok(Lattice { phi, c1 })
    }

    /// The rank-one lattice Z with φ(z) = 1 and c̄₁ = 0, whose Novikov ring
    /// is the field of Laurent series in z.
    pub fn laurent() -> Self {
        Lattice {
            phi: vec![BigRational::from_integer(BigInt::from(1))],
            c1: vec![0],
        }
    }

    pub fn rank(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[BigRational] {
        &self.phi
    }

    pub fn c1(&self) -> &[i64] {
        &self.c1
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.rank())
    }

    /// The i-th generator. Panics if `i >= rank`.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        GroupElement(coords)
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement, LatticeError> {
        let g = GroupElement(coords);
        self.check(&g)?;
        Ok(g)
    }

    pub fn check(&self, g: &GroupElement) -> Result<(), LatticeError> {
        if g.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: g.rank(),
            });
        }
        Ok(())
    }

    /// φ(g) = Σ φᵢ·gᵢ.
    pub fn weight(&self, g: &GroupElement) -> Result<BigRational, LatticeError> {
        self.check(g)?;
        Ok(self.weight_unchecked(g))
    }

    pub(crate) fn weight_unchecked(&self, g: &GroupElement) -> BigRational {
        let mut acc = BigRational::zero();
        for (p, &c) in self.phi.iter().zip(g.coords()) {
            if c != 0 {
                acc += p * BigRational::from_integer(BigInt::from(c));
            }
        }
        acc
    }

    /// c̄₁(g) = Σ c1ᵢ·gᵢ.
    pub fn chern(&self, g: &GroupElement) -> Result<i64, LatticeError> {
        self.check(g)?;
        Ok(self.chern_unchecked(g))
    }

    pub(crate) fn chern_unchecked(&self, g: &GroupElement) -> i64 {
        self.c1.iter().zip(g.coords()).map(|(a, b)| a * b).sum()
    }

    /// Membership in Γ₀ = ker c̄₁.
    pub fn in_gamma0(&self, g: &GroupElement) -> Result<bool, LatticeError> {
        Ok(self.chern(g)? == 0)
    }

    pub fn minimal_chern_number(&self) -> ChernNumber {
        let n = self
            .c1
            .iter()
            .map(|c| c.unsigned_abs())
            .fold(0u64, |acc, c| acc.gcd(&c));
        if n == 0 {
            ChernNumber::Unbounded
        } else {
            ChernNumber::Finite(n)
        }
    }
}
