//! Determinant classes in K̄₁(Λ) ≅ U(Λ)/{±1} and Wh(Λ) ≅ U(Λ)/{±Γ}.
//!
//! Since Λ has no zero divisors, K̄₁ is detected by determinants. A class
//! is stored as a quotient `num / den` of certified units so that group
//! operations and equality tests on exact inputs never need a truncated
//! inverse. A single-series representative is produced on demand.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::series::{Agreement, Cutoff, NovikovElement, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("{0} is not a certified unit")]
    NotAUnit(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn require_unit(u: &NovikovElement) -> Result<(), ClassError> {
    match u.leading_monomial() {
        Ok(_) => Ok(()),
        Err(SeriesError::ZeroElement) | Err(SeriesError::UndeterminedLeadingTerm { .. }) => {
            Err(ClassError::NotAUnit(u.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

/// Class `[b/c]` of a change of basis, i.e. a unit of Λ modulo sign.
#[derive(Debug, Clone)]
pub struct BasisChangeClass {
    num: NovikovElement,
    den: NovikovElement,
}

impl BasisChangeClass {
    pub fn trivial(lattice: &std::sync::Arc<crate::lattice::Lattice>) -> Self {
        BasisChangeClass {
            num: NovikovElement::one(lattice),
            den: NovikovElement::one(lattice),
        }
    }

    pub fn from_unit(u: NovikovElement) -> Result<Self, ClassError> {
        let one = NovikovElement::one(u.lattice());
        Self::from_quotient(u, one)
    }

    pub fn from_quotient(num: NovikovElement, den: NovikovElement) -> Result<Self, ClassError> {
        require_unit(&num)?;
        require_unit(&den)?;
        if !crate::series::same_lattice(num.lattice(), den.lattice()) {
            return Err(SeriesError::LatticeMismatch.into());
        }
        Ok(BasisChangeClass { num, den })
    }

    pub fn numerator(&self) -> &NovikovElement {
        &self.num
    }

    pub fn denominator(&self) -> &NovikovElement {
        &self.den
    }

    /// Group operation (written additively in K̄₁).
    pub fn combine(&self, other: &Self) -> Self {
        BasisChangeClass {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn inverse(&self) -> Self {
        BasisChangeClass {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(&other.inverse())
    }

    /// Equality modulo ±1: `num₁·den₂ = ±num₂·den₁`.
    pub fn agreement(&self, other: &Self) -> Agreement {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        let plus = lhs.agreement(&rhs).expect("same lattice");
        if plus.holds() {
            return plus;
        }
        lhs.agreement(&-&rhs).expect("same lattice")
    }

    pub fn is_trivial(&self) -> bool {
        self.agreement(&Self::trivial(self.num.lattice())).holds()
    }

    pub fn to_whitehead(&self) -> WhiteheadClass {
        WhiteheadClass::normalized(self.num.clone(), self.den.clone())
    }

    /// `num · den⁻¹` as a single series.
    pub fn representative(&self, cutoff: &BigRational) -> Result<NovikovElement, ClassError> {
        Ok(self.num.div(&self.den, cutoff)?)
    }

    pub fn cutoff(&self) -> Cutoff {
        self.num.cutoff().meet(self.den.cutoff())
    }
}

/// Class of a unit in Wh(Λ) = U(Λ)/{±Γ}.
///
/// Numerator and denominator are normalized so their leading monomial sits
/// at the identity with positive coefficient; a constant denominator is
/// folded into the numerator.
#[derive(Debug, Clone)]
pub struct WhiteheadClass {
    num: NovikovElement,
    den: NovikovElement,
}

fn strip_sign_and_group(u: &NovikovElement) -> NovikovElement {
    let (c, g) = u.leading_monomial().expect("certified unit");
    let shifted = u.shift(&-&g);
    if c.is_negative() {
        -shifted
    } else {
        shifted
    }
}

impl WhiteheadClass {
    fn normalized(num: NovikovElement, den: NovikovElement) -> Self {
        let mut num = strip_sign_and_group(&num);
        let mut den = strip_sign_and_group(&den);
        if den.is_exact() && den.support_len() == 1 {
            let c = den.coefficient(&den.lattice().identity());
            num = num.scale(&c.recip());
            den = NovikovElement::one(den.lattice());
        }
        WhiteheadClass { num, den }
    }

    /// The class of a unit `u`: divide by the signed monomial of its leading
    /// term.
    pub fn from_unit(u: NovikovElement) -> Result<Self, ClassError> {
        Ok(BasisChangeClass::from_unit(u)?.to_whitehead())
    }

    pub fn from_quotient(num: NovikovElement, den: NovikovElement) -> Result<Self, ClassError> {
        Ok(BasisChangeClass::from_quotient(num, den)?.to_whitehead())
    }

    pub fn trivial(lattice: &std::sync::Arc<crate::lattice::Lattice>) -> Self {
        BasisChangeClass::trivial(lattice).to_whitehead()
    }

    pub fn numerator(&self) -> &NovikovElement {
        &self.num
    }

    pub fn denominator(&self) -> &NovikovElement {
        &self.den
    }

    pub fn combine(&self, other: &Self) -> Self {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(self.den.clone(), self.num.clone())
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(&other.inverse())
    }

    pub fn agreement(&self, other: &Self) -> Agreement {
        (&self.num * &other.den)
            .agreement(&(&other.num * &self.den))
            .expect("same lattice")
    }

    pub fn same_class(&self, other: &Self) -> bool {
        self.agreement(other).holds()
    }

    pub fn is_trivial(&self) -> bool {
        self.num.agreement(&self.den).expect("same lattice").holds()
    }

    /// Positive rational leading coefficient of the normalized representative;
    /// its image under the leading-term homomorphism to Q^×/{±1}.
    pub fn leading_coefficient(&self) -> BigRational {
        let (a, _) = self.num.leading_monomial().expect("normalized unit");
        let (b, _) = self.den.leading_monomial().expect("normalized unit");
        a / b
    }

    /// Whether the normalized representative lies in Λ₀, i.e. the class is
    /// in the image of Wh(Λ₀) → Wh(Λ).
    pub fn in_lambda0(&self) -> bool {
        self.num.in_lambda0() && self.den.in_lambda0()
    }

    /// Normalized single-series representative, exact when the denominator
    /// is trivial and otherwise valid below `cutoff`.
    pub fn representative(&self, cutoff: &BigRational) -> Result<NovikovElement, ClassError> {
        if self.den == NovikovElement::one(self.den.lattice()) {
            return Ok(self.num.clone());
        }
        Ok(self.num.div(&self.den, cutoff)?)
    }

    pub fn cutoff(&self) -> Cutoff {
        self.num.cutoff().meet(self.den.cutoff())
    }
}

impl fmt::Display for WhiteheadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_exact() && self.den.support_len() == 1 && self.den.coefficient(&self.den.lattice().identity()).is_one() {
            write!(f, "[{}]", self.num)
        } else {
            write!(f, "[({}) / ({})]", self.num, self.den)
        }
    }
}
