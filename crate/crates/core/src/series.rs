//! Elements of the Novikov ring Λ = N(Γ, φ, Q).
//!
//! An element is stored as finitely many nonzero rational coefficients
//! together with a [`Cutoff`]. A finite cutoff `w` means every term of
//! weight `< w` is known and stored; terms of weight `>= w` are unknown,
//! not zero. Every operation propagates the weakest honest cutoff.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{GroupElement, Lattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("operands live over different lattices")]
    LatticeMismatch,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the zero element is not invertible")]
    ZeroElement,
    #[error("ambiguous leading term: {count} support elements share the minimal weight {weight}")]
    AmbiguousLeadingTerm { weight: BigRational, count: usize },
    #[error("leading term undetermined: no terms known below cutoff {cutoff}")]
    UndeterminedLeadingTerm { cutoff: BigRational },
    #[error("a target cutoff is required to invert a non-monomial element")]
    MissingCutoff,
    #[error("column {column}: {message}")]
    Literal { column: usize, message: String },
}

/// Precision marker of a series: terms below a finite cutoff are known.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cutoff {
    Finite(BigRational),
    Exact,
}

impl Cutoff {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Cutoff::Finite(w) => Some(w),
            Cutoff::Exact => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Cutoff::Exact)
    }

    /// Whether a term of weight `w` lies below the cutoff.
    pub fn admits(&self, w: &BigRational) -> bool {
        match self {
            Cutoff::Finite(c) => w < c,
            Cutoff::Exact => true,
        }
    }

    pub fn shifted(&self, by: &BigRational) -> Cutoff {
        match self {
            Cutoff::Finite(c) => Cutoff::Finite(c + by),
            Cutoff::Exact => Cutoff::Exact,
        }
    }

    pub fn meet(&self, other: &Cutoff) -> Cutoff {
        std::cmp::min(self, other).clone()
    }
}

impl PartialOrd for Cutoff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cutoff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cutoff::Exact, Cutoff::Exact) => Ordering::Equal,
            (Cutoff::Exact, Cutoff::Finite(_)) => Ordering::Greater,
            (Cutoff::Finite(_), Cutoff::Exact) => Ordering::Less,
            (Cutoff::Finite(a), Cutoff::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Finite(w) => write!(f, "{w}"),
            Cutoff::Exact => write!(f, "exact"),
        }
    }
}

/// Result of comparing two possibly truncated elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    Equal,
    /// Equal on every term of weight below the given level; unknown above.
    EqualBelow(BigRational),
    Different,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        !matches!(self, Agreement::Different)
    }

    pub fn certified_cutoff(&self) -> Option<Cutoff> {
        match self {
            Agreement::Equal => Some(Cutoff::Exact),
            Agreement::EqualBelow(w) => Some(Cutoff::Finite(w.clone())),
            Agreement::Different => None,
        }
    }
}

/// The minimal-weight part of an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeadingTerm {
    Zero,
    /// Truncated element with no known terms.
    Undetermined { cutoff: BigRational },
    Monomial {
        coefficient: BigRational,
        element: GroupElement,
    },
    /// Several support elements share the minimal weight.
    Slice {
        weight: BigRational,
        terms: Vec<(GroupElement, BigRational)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovElement {
    lattice: Arc<Lattice>,
    terms: BTreeMap<GroupElement, BigRational>,
    cutoff: Cutoff,
}

pub(crate) fn same_lattice(a: &Arc<Lattice>, b: &Arc<Lattice>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl NovikovElement {
    pub fn zero(lattice: &Arc<Lattice>) -> Self {
        NovikovElement {
            lattice: lattice.clone(),
            terms: BTreeMap::new(),
            cutoff: Cutoff::Exact,
        }
    }

    pub fn one(lattice: &Arc<Lattice>) -> Self {
        Self::constant(lattice, BigRational::one())
    }

    pub fn constant(lattice: &Arc<Lattice>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(lattice.identity(), c);
        }
        NovikovElement {
            lattice: lattice.clone(),
            terms,
            cutoff: Cutoff::Exact,
        }
    }

    /// `c·g`, or the zero element when `c = 0`.
    pub fn monomial(
        lattice: &Arc<Lattice>,
        coefficient: BigRational,
        g: GroupElement,
    ) -> Result<Self, SeriesError> {
        lattice.check(&g)?;
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(g, coefficient);
        }
        Ok(NovikovElement {
            lattice: lattice.clone(),
            terms,
            cutoff: Cutoff::Exact,
        })
    }

    /// Sums the given terms, drops zero coefficients and everything at or
    /// above `cutoff`.
    pub fn from_terms<I>(lattice: &Arc<Lattice>, terms: I, cutoff: Cutoff) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (GroupElement, BigRational)>,
    {
        let mut map: BTreeMap<GroupElement, BigRational> = BTreeMap::new();
        for (g, c) in terms {
            lattice.check(&g)?;
            *map.entry(g).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|g, c| !c.is_zero() && cutoff.admits(&lattice.weight_unchecked(g)));
        Ok(NovikovElement {
            lattice: lattice.clone(),
            terms: map,
            cutoff,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn cutoff(&self) -> &Cutoff {
        &self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff.is_exact()
    }

    /// Exactly zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// No known terms: zero at least up to the cutoff.
    pub fn is_zero_below_cutoff(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigRational)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn weight(&self, g: &GroupElement) -> BigRational {
        self.lattice.weight_unchecked(g)
    }

    /// Minimal weight over the stored support.
    pub fn min_weight(&self) -> Option<BigRational> {
        self.terms.keys().map(|g| self.weight(g)).min()
    }

    /// Lower bound for the weight of every (known or unknown) term, used by
    /// the cutoff rule of multiplication. `None` for the exact zero.
    fn valuation_bound(&self) -> Option<BigRational> {
        match (self.min_weight(), &self.cutoff) {
            (Some(w), _) => Some(w),
            (None, Cutoff::Finite(c)) => Some(c.clone()),
            (None, Cutoff::Exact) => None,
        }
    }

    fn check_lattice(&self, other: &Self) -> Result<(), SeriesError> {
        if same_lattice(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(SeriesError::LatticeMismatch)
        }
    }

    fn with_terms(&self, terms: BTreeMap<GroupElement, BigRational>, cutoff: Cutoff) -> Self {
        let mut out = NovikovElement {
            lattice: self.lattice.clone(),
            terms,
            cutoff,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        let lattice = self.lattice.clone();
        let cutoff = self.cutoff.clone();
        self.terms
            .retain(|g, c| !c.is_zero() && cutoff.admits(&lattice.weight_unchecked(g)));
    }

    /// Lowers the precision to `min(cutoff, w)`.
    pub fn truncate(&self, w: &BigRational) -> Self {
        let cutoff = self.cutoff.meet(&Cutoff::Finite(w.clone()));
        self.with_terms(self.terms.clone(), cutoff)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_lattice(other)?;
        let mut terms = self.terms.clone();
        for (g, c) in &other.terms {
            *terms.entry(g.clone()).or_insert_with(BigRational::zero) += c;
        }
        Ok(self.with_terms(terms, self.cutoff.meet(&other.cutoff)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&-other)
    }

    /// Convolution product `(a·b)(A) = Σ_B a(B) b(A - B)`.
    ///
    /// Cutoff: exact if both operands are exact, otherwise
    /// `min(c_a + w_b, c_b + w_a)` with `w` the minimal support weight.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_lattice(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.lattice));
        }
        let cutoff = match (&self.cutoff, &other.cutoff) {
            (Cutoff::Exact, Cutoff::Exact) => Cutoff::Exact,
            _ => {
                let wa = self.valuation_bound().expect("nonzero operand");
                let wb = other.valuation_bound().expect("nonzero operand");
                self.cutoff.shifted(&wb).meet(&other.cutoff.shifted(&wa))
            }
        };
        Ok(self.product_below(other, cutoff))
    }

    fn weighted_terms(&self) -> Vec<(&GroupElement, &BigRational, BigRational)> {
        self.terms
            .iter()
            .map(|(g, c)| (g, c, self.weight(g)))
            .collect()
    }

    /// Raw convolution keeping only terms admitted by `cutoff`.
    fn product_below(&self, other: &Self, cutoff: Cutoff) -> Self {
        let a = self.weighted_terms();
        let b = other.weighted_terms();
        let mut terms: BTreeMap<GroupElement, BigRational> = BTreeMap::new();
        for (ga, ca, wa) in &a {
            for (gb, cb, wb) in &b {
                if let Cutoff::Finite(c) = &cutoff {
                    if &(wa + wb) >= c {
                        continue;
                    }
                }
                *terms.entry(*ga + *gb).or_insert_with(BigRational::zero) += *ca * *cb;
            }
        }
        self.with_terms(terms, cutoff)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            // 0·x is exactly zero even when x is truncated.
            return Self::zero(&self.lattice);
        }
        let terms = self.terms.iter().map(|(g, v)| (g.clone(), v * c)).collect();
        self.with_terms(terms, self.cutoff.clone())
    }

    /// Multiplication by the monomial `1·g`.
    pub fn shift(&self, g: &GroupElement) -> Self {
        let w = self.weight(g);
        let terms = self.terms.iter().map(|(h, v)| (h + g, v.clone())).collect();
        self.with_terms(terms, self.cutoff.shifted(&w))
    }

    pub fn leading_term(&self) -> LeadingTerm {
        let weighted = self.weighted_terms();
        let Some(min) = weighted.iter().map(|(_, _, w)| w).min().cloned() else {
            return match &self.cutoff {
                Cutoff::Exact => LeadingTerm::Zero,
                Cutoff::Finite(c) => LeadingTerm::Undetermined { cutoff: c.clone() },
            };
        };
        let slice: Vec<_> = weighted
            .into_iter()
            .filter(|(_, _, w)| *w == min)
            .map(|(g, c, _)| (g.clone(), c.clone()))
            .collect();
        if slice.len() == 1 {
            let (element, coefficient) = slice.into_iter().next().unwrap();
            LeadingTerm::Monomial {
                coefficient,
                element,
            }
        } else {
            LeadingTerm::Slice {
                weight: min,
                terms: slice,
            }
        }
    }

    /// The unique leading monomial `(coefficient, element)`, or an error
    /// when the element is zero, undetermined, or has a tied leading slice.
    pub fn leading_monomial(&self) -> Result<(BigRational, GroupElement), SeriesError> {
        match self.leading_term() {
            LeadingTerm::Zero => Err(SeriesError::ZeroElement),
            LeadingTerm::Undetermined { cutoff } => {
                Err(SeriesError::UndeterminedLeadingTerm { cutoff })
            }
            LeadingTerm::Monomial {
                coefficient,
                element,
            } => Ok((coefficient, element)),
            LeadingTerm::Slice { weight, terms } => Err(SeriesError::AmbiguousLeadingTerm {
                weight,
                count: terms.len(),
            }),
        }
    }

    /// Whether the element is certified to be a unit: its leading term is
    /// a single monomial with (necessarily invertible) rational coefficient.
    pub fn is_certified_unit(&self) -> bool {
        self.leading_monomial().is_ok()
    }

    /// Multiplicative inverse, computed by writing `a = c·g·(1 + r)` with
    /// `r` supported at positive weight and summing the geometric series of
    /// `-r` up to `target_cutoff`. Exact monomials invert exactly and need
    /// no target.
    pub fn invert(&self, target_cutoff: Option<&BigRational>) -> Result<Self, SeriesError> {
        let (c, g) = self.leading_monomial()?;
        let c_inv = c.recip();
        let g_inv = -&g;
        let wg = self.weight(&g);
        if self.terms.len() == 1 && self.is_exact() {
            return Self::monomial(&self.lattice, c_inv, g_inv);
        }
        let target = target_cutoff.ok_or(SeriesError::MissingCutoff)?;

        // r = a / (c g) - 1, supported at strictly positive weight.
        let r_terms: BTreeMap<GroupElement, BigRational> = self
            .terms
            .iter()
            .filter(|(h, _)| **h != g)
            .map(|(h, v)| (h - &g, -(v * &c_inv)))
            .collect();
        let relative = self
            .cutoff
            .shifted(&-&wg)
            .meet(&Cutoff::Finite(target + &wg));
        let minus_r = self.with_terms(r_terms, Cutoff::Exact);

        let one = Self::one(&self.lattice);
        let mut acc = one.truncate(relative.finite().expect("finite target"));
        let mut power = acc.clone();
        loop {
            power = power.product_below(&minus_r, relative.clone());
            if power.terms.is_empty() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        acc.cutoff = relative;
        acc.prune();
        Ok(acc.scale(&c_inv).shift(&g_inv))
    }

    /// Exact quotient `self / divisor` of two exact elements when it exists
    /// as a finite sum. Division runs in lexicographic order on Zᵏ after
    /// shifting both operands to non-negative exponents.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if !same_lattice(&self.lattice, &divisor.lattice)
            || !self.is_exact()
            || !divisor.is_exact()
            || divisor.terms.is_empty()
        {
            return None;
        }
        if self.terms.is_empty() {
            return Some(Self::zero(&self.lattice));
        }
        let low = |t: &BTreeMap<GroupElement, BigRational>| -> Vec<i64> {
            let k = self.lattice.rank();
            (0..k)
                .map(|i| t.keys().map(|g| g.coords()[i]).min().unwrap())
                .collect()
        };
        let offset: Vec<i64> = low(&self.terms)
            .iter()
            .zip(low(&divisor.terms))
            .map(|(a, b)| a - b)
            .collect();
        let (lead_b, coef_b) = divisor.terms.iter().next_back().unwrap();
        let mut rem = self.terms.clone();
        let mut quotient: BTreeMap<GroupElement, BigRational> = BTreeMap::new();
        while let Some((lead_r, coef_r)) = rem.iter().next_back() {
            let t = lead_r - lead_b;
            if t.coords().iter().zip(&offset).any(|(a, b)| a < b) {
                return None;
            }
            let q = coef_r / coef_b;
            for (h, v) in &divisor.terms {
                let key = h + &t;
                let entry = rem.entry(key.clone()).or_insert_with(BigRational::zero);
                *entry -= v * &q;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quotient.insert(t, q);
        }
        Some(self.with_terms(quotient, Cutoff::Exact))
    }

    /// `self / divisor`: exact when both are exact and the quotient is a
    /// finite sum, otherwise a series valid below `working_cutoff`.
    pub fn div(&self, divisor: &Self, working_cutoff: &BigRational) -> Result<Self, SeriesError> {
        self.check_lattice(divisor)?;
        if let Some(q) = self.div_exact(divisor) {
            return Ok(q);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.lattice));
        }
        let wa = self.valuation_bound().unwrap_or_else(BigRational::zero);
        let inv = divisor.invert(Some(&(working_cutoff - &wa)))?;
        Ok(self.checked_mul(&inv)?.truncate(working_cutoff))
    }

    /// Membership in Λ₀: every support element lies in Γ₀.
    pub fn in_lambda0(&self) -> bool {
        self.terms
            .keys()
            .all(|g| self.lattice.chern_unchecked(g) == 0)
    }

    pub fn agreement(&self, other: &Self) -> Result<Agreement, SeriesError> {
        let diff = self.checked_sub(other)?;
        Ok(if !diff.terms.is_empty() {
            Agreement::Different
        } else {
            match diff.cutoff {
                Cutoff::Exact => Agreement::Equal,
                Cutoff::Finite(w) => Agreement::EqualBelow(w),
            }
        })
    }

    /// Terms sorted by increasing weight, ties broken by coordinates.
    pub fn sorted_terms(&self) -> Vec<(&GroupElement, &BigRational)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(g, c)| (self.weight(g), g, c))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        v.into_iter().map(|(_, g, c)| (g, c)).collect()
    }

    /// Parses the literal syntax `c*g(a1,...,ak) ± ...` with an optional
    /// `@cutoff=p/q` suffix. A bare rational is a coefficient at the
    /// identity and `g(...)` alone has coefficient 1.
    pub fn parse(lattice: &Arc<Lattice>, text: &str) -> Result<Self, SeriesError> {
        LiteralParser::new(text).parse(lattice)
    }
}

impl Neg for &NovikovElement {
    type Output = NovikovElement;

    fn neg(self) -> NovikovElement {
        let terms = self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect();
        NovikovElement {
            lattice: self.lattice.clone(),
            terms,
            cutoff: self.cutoff.clone(),
        }
    }
}

impl Neg for NovikovElement {
    type Output = NovikovElement;

    fn neg(self) -> NovikovElement {
        -&self
    }
}

// Operator forms panic on lattice mismatch; use the `checked_*` methods
// when operands come from untrusted input.
impl Add for &NovikovElement {
    type Output = NovikovElement;

    fn add(self, rhs: &NovikovElement) -> NovikovElement {
        self.checked_add(rhs).expect("lattice mismatch in addition")
    }
}

impl Sub for &NovikovElement {
    type Output = NovikovElement;

    fn sub(self, rhs: &NovikovElement) -> NovikovElement {
        self.checked_sub(rhs).expect("lattice mismatch in subtraction")
    }
}

impl Mul for &NovikovElement {
    type Output = NovikovElement;

    fn mul(self, rhs: &NovikovElement) -> NovikovElement {
        self.checked_mul(rhs).expect("lattice mismatch in multiplication")
    }
}

impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (g, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if g.is_identity() {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*{g}")?;
            }
        }
        if let Cutoff::Finite(w) = &self.cutoff {
            write!(f, " @cutoff={w}")?;
        }
        Ok(())
    }
}

/// Parses a signed rational `p` or `p/q` (arbitrary precision).
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let valid_int = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) if valid_int(d, false) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

struct LiteralParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> LiteralParser<'a> {
    fn new(src: &'a str) -> Self {
        LiteralParser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SeriesError> {
        Err(SeriesError::Literal {
            column: self.src[..self.pos.min(self.src.len())].chars().count() + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn unsigned_rational(&mut self) -> Result<BigRational, SeriesError> {
        let num = self.digits();
        if num.is_empty() {
            return self.error("expected a number");
        }
        let n: BigInt = num.parse().expect("digits");
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let den = self.digits();
            if den.is_empty() {
                return self.error("expected a denominator");
            }
            let d: BigInt = den.parse().expect("digits");
            if d.is_zero() {
                return self.error("zero denominator");
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }

    fn signed_int(&mut self) -> Result<i64, SeriesError> {
        self.skip_ws();
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return self.error("expected an integer coordinate");
        }
        match digits.parse::<i64>() {
            Ok(v) => Ok(if negative { -v } else { v }),
            Err(_) => self.error("coordinate out of range"),
        }
    }

    fn group_element(&mut self) -> Result<Vec<i64>, SeriesError> {
        if !self.eat(b'g') {
            return self.error("expected 'g('");
        }
        self.skip_ws();
        if !self.eat(b'(') {
            return self.error("expected '(' after 'g'");
        }
        let mut coords = Vec::new();
        self.skip_ws();
        if self.eat(b')') {
            return Ok(coords);
        }
        loop {
            coords.push(self.signed_int()?);
            self.skip_ws();
            if self.eat(b')') {
                return Ok(coords);
            }
            if !self.eat(b',') {
                return self.error("expected ',' or ')'");
            }
        }
    }

    fn term(&mut self) -> Result<(BigRational, Option<Vec<i64>>), SeriesError> {
        self.skip_ws();
        match self.peek() {
            Some(b'g') => Ok((BigRational::one(), Some(self.group_element()?))),
            Some(b) if b.is_ascii_digit() => {
                let c = self.unsigned_rational()?;
                self.skip_ws();
                if self.eat(b'*') {
                    self.skip_ws();
                    Ok((c, Some(self.group_element()?)))
                } else {
                    Ok((c, None))
                }
            }
            _ => self.error("expected a term"),
        }
    }

    fn parse(mut self, lattice: &Arc<Lattice>) -> Result<NovikovElement, SeriesError> {
        let mut raw = Vec::new();
        self.skip_ws();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let start = self.pos;
            let (c, g) = self.term()?;
            let g = match g {
                Some(coords) => {
                    if coords.len() != lattice.rank() {
                        self.pos = start;
                        return self.error(format!(
                            "group element has {} coordinates, lattice rank is {}",
                            coords.len(),
                            lattice.rank()
                        ));
                    }
                    GroupElement::new(coords)
                }
                None => lattice.identity(),
            };
            raw.push((g, if negative { -c } else { c }));
            self.skip_ws();
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        self.skip_ws();
        let mut cutoff = Cutoff::Exact;
        if self.eat(b'@') {
            let rest = &self.src[self.pos..];
            let Some(value) = rest.strip_prefix("cutoff=") else {
                return self.error("expected '@cutoff='");
            };
            self.pos += "cutoff=".len();
            match parse_rational(value) {
                Some(w) => cutoff = Cutoff::Finite(w),
                None => return self.error("invalid cutoff value"),
            }
            self.pos = self.bytes.len();
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return self.error("unexpected trailing input");
        }
        NovikovElement::from_terms(lattice, raw, cutoff)
    }
}

impl From<i64> for Cutoff {
    fn from(w: i64) -> Self {
        Cutoff::Finite(int(w))
    }
}
