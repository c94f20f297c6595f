use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::lattice::{ChernNumber, GroupElement, Lattice};
use crate::linalg::{determinant, echelon, rank, Matrix, ZeroCheck};
use crate::series::{same_lattice, Cutoff, NovikovElement};

use super::classes::{BasisChangeClass, WhiteheadClass};
use super::TorsionError;

/// Grading group of a complex: Z/m with m = 2N even, or Z when N = ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grading {
    Cyclic(u32),
    Integer,
}

impl Grading {
    pub const Z2: Grading = Grading::Cyclic(2);

    pub fn from_chern(n: ChernNumber) -> Grading {
        match n {
            ChernNumber::Finite(n) => Grading::Cyclic((2 * n) as u32),
            ChernNumber::Unbounded => Grading::Integer,
        }
    }

    pub fn check(&self) -> Result<(), TorsionError> {
        match self {
            Grading::Cyclic(m) if *m < 2 || m % 2 != 0 => Err(TorsionError::Structure(format!(
                "cyclic grading modulus must be even and at least 2, got {m}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn reduce(&self, degree: i64) -> i64 {
        match self {
            Grading::Cyclic(m) => degree.rem_euclid(*m as i64),
            Grading::Integer => degree,
        }
    }

    pub fn successor(&self, degree: i64) -> i64 {
        self.reduce(degree + 1)
    }

    pub fn predecessor(&self, degree: i64) -> i64 {
        self.reduce(degree - 1)
    }

    /// Image under the collapse to Z₂.
    pub fn parity(degree: i64) -> usize {
        degree.rem_euclid(2) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }
}

/// Working parameters for torsion computations.
#[derive(Debug, Clone)]
pub struct TorsionOptions {
    /// Precision used whenever a division has to be expanded as a series.
    pub working_cutoff: BigRational,
    /// Column visiting order for ∂⁰ (local indices of even generators).
    pub even_order: Option<Vec<usize>>,
    /// Column visiting order for ∂¹ (local indices of odd generators).
    pub odd_order: Option<Vec<usize>>,
}

pub const DEFAULT_CUTOFF: i64 = 20;

impl Default for TorsionOptions {
    fn default() -> Self {
        TorsionOptions {
            working_cutoff: BigRational::from_integer(BigInt::from(DEFAULT_CUTOFF)),
            even_order: None,
            odd_order: None,
        }
    }
}

impl TorsionOptions {
    pub fn with_cutoff(cutoff: BigRational) -> Self {
        TorsionOptions {
            working_cutoff: cutoff,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub generators: usize,
    /// Weakest cutoff at which a ∂² entry was certified zero.
    pub certified: Cutoff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyRanks {
    /// Rank of the homology in each occupied degree.
    pub ranks: BTreeMap<i64, usize>,
    pub certified: Cutoff,
}

impl HomologyRanks {
    pub fn is_acyclic(&self) -> bool {
        self.ranks.values().all(|&r| r == 0)
    }
}

/// Milnor torsion together with the data it was computed from.
#[derive(Debug, Clone)]
pub struct TorsionResult {
    /// Class in K̄₁(Λ) = U(Λ)/{±1}.
    pub k1: BasisChangeClass,
    pub class: WhiteheadClass,
    /// Selected pivot generators of ∂⁰ and ∂¹ (indices into the complex).
    pub even_pivots: Vec<usize>,
    pub odd_pivots: Vec<usize>,
    pub certified: Cutoff,
}

/// A change of basis `c̃_j = Σ_i T_ij c_i` with its inverse.
#[derive(Debug, Clone)]
pub struct BasisChange {
    forward: Matrix,
    inverse: Matrix,
}

impl BasisChange {
    pub fn new(forward: Matrix, inverse: Matrix) -> Result<Self, TorsionError> {
        let n = forward.rows();
        if forward.cols() != n || inverse.rows() != n || inverse.cols() != n {
            return Err(TorsionError::Structure("basis change must be square".into()));
        }
        let id = Matrix::identity(forward.lattice(), n);
        for product in [forward.mul(&inverse)?, inverse.mul(&forward)?] {
            if let ZeroCheck::Nonzero { row, col } = product.sub(&id)?.zero_check() {
                return Err(TorsionError::NonInvertible(format!(
                    "basis change times its inverse differs from the identity at ({row}, {col})"
                )));
            }
        }
        Ok(BasisChange { forward, inverse })
    }

    /// Diagonal change `c̃_x = g_x · c_x` relabeling every lift by `g_x`.
    pub fn relabel(lattice: &Arc<Lattice>, shifts: &[GroupElement]) -> Result<Self, TorsionError> {
        let n = shifts.len();
        let mut forward = Matrix::zeros(lattice, n, n);
        let mut inverse = Matrix::zeros(lattice, n, n);
        for (i, g) in shifts.iter().enumerate() {
            let one = num_traits::One::one();
            forward.set(i, i, NovikovElement::monomial(lattice, one, g.clone())?);
            inverse.set(i, i, NovikovElement::monomial(lattice, num_traits::One::one(), -g)?);
        }
        Ok(BasisChange { forward, inverse })
    }

    pub fn forward(&self) -> &Matrix {
        &self.forward
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }
}

/// Square matrices whose columns express a graded basis in a common
/// reference basis, split by Z₂-degree.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    pub even: Matrix,
    pub odd: Matrix,
}

/// `[b/c] = [b⁰/c⁰] − [b¹/c¹]`, realized as
/// `det B⁰ · det C¹ / (det C⁰ · det B¹)`.
pub fn basis_change_class(
    b: &GradedBasis,
    c: &GradedBasis,
    working_cutoff: &BigRational,
) -> Result<BasisChangeClass, TorsionError> {
    if b.even.rows() != c.even.rows() || b.odd.rows() != c.odd.rows() {
        return Err(TorsionError::Structure("graded bases of different modules".into()));
    }
    let det = |m: &Matrix| -> Result<NovikovElement, TorsionError> {
        let (d, _) = determinant(m, working_cutoff)?;
        if !d.is_certified_unit() {
            return Err(TorsionError::NonInvertible(format!("transition determinant {d}")));
        }
        Ok(d)
    };
    let num = &det(&b.even)? * &det(&c.odd)?;
    let den = &det(&c.even)? * &det(&b.odd)?;
    Ok(BasisChangeClass::from_quotient(num, den)?)
}

/// Free graded complex over Λ with a distinguished basis of named
/// generators. `differential[(t, s)]` is the coefficient of generator `t`
/// in `∂(s)` and is nonzero only when `deg t = deg s + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedComplex {
    lattice: Arc<Lattice>,
    grading: Grading,
    generators: Vec<Generator>,
    differential: Matrix,
}

pub(crate) struct Z2Blocks {
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
    /// ∂⁰: rows odd, columns even.
    pub d0: Matrix,
    /// ∂¹: rows even, columns odd.
    pub d1: Matrix,
}

impl BasedComplex {
    pub fn new(
        lattice: Arc<Lattice>,
        grading: Grading,
        generators: Vec<Generator>,
        differential: Matrix,
    ) -> Result<Self, TorsionError> {
        grading.check()?;
        let n = generators.len();
        if differential.rows() != n || differential.cols() != n {
            return Err(TorsionError::Structure(format!(
                "differential is {}x{} but there are {n} generators",
                differential.rows(),
                differential.cols()
            )));
        }
        if !same_lattice(differential.lattice(), &lattice) {
            return Err(TorsionError::Structure("differential over a different lattice".into()));
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(TorsionError::Structure("empty generator name".into()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(TorsionError::Structure(format!("duplicate generator '{}'", g.name)));
            }
            if grading.reduce(g.degree) != g.degree {
                return Err(TorsionError::Structure(format!(
                    "degree {} of '{}' is not reduced for grading {:?}",
                    g.degree, g.name, grading
                )));
            }
        }
        for (t, s, e) in differential.entries() {
            if !e.is_zero_below_cutoff()
                && generators[t].degree != grading.successor(generators[s].degree)
            {
                return Err(TorsionError::Structure(format!(
                    "differential entry from '{}' (degree {}) to '{}' (degree {}) does not raise degree by one",
                    generators[s].name, generators[s].degree, generators[t].name, generators[t].degree
                )));
            }
        }
        Ok(BasedComplex {
            lattice,
            grading,
            generators,
            differential,
        })
    }

    /// Complex with zero differential.
    pub fn without_differential(
        lattice: Arc<Lattice>,
        grading: Grading,
        generators: Vec<Generator>,
    ) -> Result<Self, TorsionError> {
        let n = generators.len();
        let d = Matrix::zeros(&lattice, n, n);
        Self::new(lattice, grading, generators, d)
    }

    /// Returns a copy with `∂(source)` having coefficient `value` at `target`.
    pub fn with_entry(&self, source: &str, target: &str, value: NovikovElement) -> Result<Self, TorsionError> {
        let s = self.index_of(source)?;
        let t = self.index_of(target)?;
        let mut d = self.differential.clone();
        d.set(t, s, value);
        Self::new(self.lattice.clone(), self.grading, self.generators.clone(), d)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn differential(&self) -> &Matrix {
        &self.differential
    }

    pub fn index_of(&self, name: &str) -> Result<usize, TorsionError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| TorsionError::Structure(format!("unknown generator '{name}'")))
    }

    fn indices_in_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.generators[i].degree == degree)
            .collect()
    }

    pub(crate) fn z2_blocks(&self) -> Z2Blocks {
        let (even, odd): (Vec<usize>, Vec<usize>) =
            (0..self.len()).partition(|&i| Grading::parity(self.generators[i].degree) == 0);
        let d0 = self.differential.select(&odd, &even);
        let d1 = self.differential.select(&even, &odd);
        Z2Blocks { even, odd, d0, d1 }
    }

    /// Checks `∂∘∂ = 0` entrywise.
    pub fn validate(&self) -> Result<ValidationReport, TorsionError> {
        let square = self.differential.mul(&self.differential)?;
        match square.zero_check() {
            ZeroCheck::Zero { certified } => Ok(ValidationReport {
                generators: self.len(),
                certified,
            }),
            ZeroCheck::Nonzero { row, col } => Err(TorsionError::NotAComplex {
                from: self.generators[col].name.clone(),
                to: self.generators[row].name.clone(),
                entry: square.get(row, col).to_string(),
            }),
        }
    }

    /// Ranks of the homology in every occupied degree, by fraction-free
    /// elimination with unit pivots.
    pub fn homology_ranks(&self, working_cutoff: &BigRational) -> Result<HomologyRanks, TorsionError> {
        let report = self.validate()?;
        let mut certified = report.certified;
        let degrees: BTreeSet<i64> = self.generators.iter().map(|g| g.degree).collect();
        let mut ranks_out = BTreeMap::new();
        let rank_from = |k: i64, certified: &mut Cutoff| -> Result<usize, TorsionError> {
            let src = self.indices_in_degree(k);
            let tgt = self.indices_in_degree(self.grading.successor(k));
            if src.is_empty() || tgt.is_empty() {
                return Ok(0);
            }
            let (r, c) = rank(&self.differential.select(&tgt, &src), working_cutoff)?;
            *certified = certified.meet(&c);
            Ok(r)
        };
        for &k in &degrees {
            let n = self.indices_in_degree(k).len();
            let out = rank_from(k, &mut certified)?;
            let inc = rank_from(self.grading.predecessor(k), &mut certified)?;
            let h = n.checked_sub(out + inc).ok_or_else(|| {
                TorsionError::Structure(format!("boundary ranks exceed module rank in degree {k}"))
            })?;
            ranks_out.insert(k, h);
        }
        Ok(HomologyRanks {
            ranks: ranks_out,
            certified,
        })
    }

    /// Number of generators of even and of odd degree.
    pub fn euler_parity(&self) -> (usize, usize) {
        let even = self
            .generators
            .iter()
            .filter(|g| Grading::parity(g.degree) == 0)
            .count();
        (even, self.len() - even)
    }

    /// Milnor torsion of an acyclic based complex as a class in Wh(Λ).
    pub fn milnor_torsion(&self, opts: &TorsionOptions) -> Result<WhiteheadClass, TorsionError> {
        Ok(self.torsion(opts)?.class)
    }

    /// Milnor torsion `τ = [b⁰ s⁰ / c⁰] − [b¹ s¹ / c¹]` of the Z₂-collapsed
    /// complex. Pivot columns `S_i` of `∂^i` are chosen by elimination; the
    /// boundary basis `b^{i+1} = ∂^i(S_i)` is lifted by `S_i` itself, so
    /// `M₀ = [∂¹(S₁) | e(S₀)]`, `M₁ = [∂⁰(S₀) | e(S₁)]` and
    /// `τ = det M₀ / det M₁`. Even degree carries the positive sign.
    pub fn torsion(&self, opts: &TorsionOptions) -> Result<TorsionResult, TorsionError> {
        let mut certified = self.validate()?.certified;
        let w = &opts.working_cutoff;
        let blocks = self.z2_blocks();
        let (ne, no) = (blocks.even.len(), blocks.odd.len());

        let order = |given: &Option<Vec<usize>>, n: usize| -> Result<Vec<usize>, TorsionError> {
            match given {
                None => Ok((0..n).collect()),
                Some(v) => {
                    let mut sorted = v.clone();
                    sorted.sort_unstable();
                    if sorted != (0..n).collect::<Vec<_>>() {
                        return Err(TorsionError::Structure(format!(
                            "pivot order {v:?} is not a permutation of 0..{n}"
                        )));
                    }
                    Ok(v.clone())
                }
            }
        };
        let e0 = echelon(&blocks.d0, &order(&opts.even_order, ne)?, w)?;
        let e1 = echelon(&blocks.d1, &order(&opts.odd_order, no)?, w)?;
        certified = certified.meet(&e0.certified).meet(&e1.certified);
        let (r0, r1) = (e0.rank, e1.rank);
        if r0 + r1 != ne || r0 + r1 != no {
            let mut ranks = BTreeMap::new();
            ranks.insert(0, ne - r0 - r1);
            ranks.insert(1, no - r0 - r1);
            return Err(TorsionError::NotAcyclic { ranks });
        }

        let unit = |n: usize, j: usize| -> Vec<NovikovElement> {
            (0..n)
                .map(|i| {
                    if i == j {
                        NovikovElement::one(&self.lattice)
                    } else {
                        NovikovElement::zero(&self.lattice)
                    }
                })
                .collect()
        };
        let mut cols0: Vec<_> = e1.pivot_columns.iter().map(|&s| blocks.d1.column(s)).collect();
        cols0.extend(e0.pivot_columns.iter().map(|&j| unit(ne, j)));
        let mut cols1: Vec<_> = e0.pivot_columns.iter().map(|&s| blocks.d0.column(s)).collect();
        cols1.extend(e1.pivot_columns.iter().map(|&j| unit(no, j)));
        let m0 = Matrix::from_columns(&self.lattice, ne, &cols0);
        let m1 = Matrix::from_columns(&self.lattice, no, &cols1);

        let (det0, c0) = determinant(&m0, w)?;
        let (det1, c1) = determinant(&m1, w)?;
        certified = certified.meet(&c0).meet(&c1);
        for d in [&det0, &det1] {
            if !d.is_certified_unit() {
                return Err(TorsionError::NonInvertible(format!(
                    "basis determinant {d} is not a certified unit"
                )));
            }
        }
        let k1 = BasisChangeClass::from_quotient(det0, det1)?;
        Ok(TorsionResult {
            class: k1.to_whitehead(),
            k1,
            even_pivots: e0.pivot_columns.iter().map(|&j| blocks.even[j]).collect(),
            odd_pivots: e1.pivot_columns.iter().map(|&j| blocks.odd[j]).collect(),
            certified,
        })
    }

    /// The same complex in the basis `c̃ = T c`: differential `T⁻¹ ∂ T`.
    pub fn change_basis(&self, change: &BasisChange) -> Result<BasedComplex, TorsionError> {
        self.check_basis_change(change)?;
        let d = change
            .inverse()
            .mul(&self.differential)?
            .mul(change.forward())?;
        BasedComplex::new(self.lattice.clone(), self.grading, self.generators.clone(), d)
    }

    /// `[c̃/c] = det T|even / det T|odd` for the change `c̃ = T c`.
    pub fn basis_change_class(
        &self,
        change: &BasisChange,
        working_cutoff: &BigRational,
    ) -> Result<BasisChangeClass, TorsionError> {
        self.check_basis_change(change)?;
        let blocks = self.z2_blocks();
        let t = change.forward();
        let id_even = Matrix::identity(&self.lattice, blocks.even.len());
        let id_odd = Matrix::identity(&self.lattice, blocks.odd.len());
        let b = GradedBasis {
            even: t.select(&blocks.even, &blocks.even),
            odd: t.select(&blocks.odd, &blocks.odd),
        };
        let c = GradedBasis {
            even: id_even,
            odd: id_odd,
        };
        basis_change_class(&b, &c, working_cutoff)
    }

    fn check_basis_change(&self, change: &BasisChange) -> Result<(), TorsionError> {
        if change.forward().rows() != self.len() {
            return Err(TorsionError::Structure(format!(
                "basis change of size {} for a complex with {} generators",
                change.forward().rows(),
                self.len()
            )));
        }
        for m in [change.forward(), change.inverse()] {
            for (r, c, e) in m.entries() {
                if !e.is_zero_below_cutoff() && self.generators[r].degree != self.generators[c].degree {
                    return Err(TorsionError::Structure(
                        "basis change mixes generators of different degree".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}
