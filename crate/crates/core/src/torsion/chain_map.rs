use std::sync::Arc;

use crate::linalg::{Matrix, ZeroCheck};
use crate::series::{same_lattice, Cutoff};

use super::classes::{BasisChangeClass, WhiteheadClass};
use super::complex::{BasedComplex, BasisChange, Generator, TorsionOptions};
use super::TorsionError;

/// Degree-0 chain map `f: source → target`; `matrix[(t, s)]` is the
/// coefficient of target generator `t` in `f(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: Arc<BasedComplex>,
    target: Arc<BasedComplex>,
    matrix: Matrix,
}

impl ChainMap {
    pub fn new(
        source: Arc<BasedComplex>,
        target: Arc<BasedComplex>,
        matrix: Matrix,
    ) -> Result<Self, TorsionError> {
        if !same_lattice(source.lattice(), target.lattice())
            || !same_lattice(source.lattice(), matrix.lattice())
        {
            return Err(TorsionError::Structure("chain map between different lattices".into()));
        }
        if source.grading() != target.grading() {
            return Err(TorsionError::Structure("chain map between different gradings".into()));
        }
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(TorsionError::Structure(format!(
                "chain map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        check_degree_shift(&source, &target, &matrix, 0)?;
        Ok(ChainMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(c: Arc<BasedComplex>) -> Self {
        let m = Matrix::identity(c.lattice(), c.len());
        ChainMap {
            source: c.clone(),
            target: c,
            matrix: m,
        }
    }

    pub fn source(&self) -> &Arc<BasedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BasedComplex> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Checks `∂_target ∘ f = f ∘ ∂_source` entrywise.
    pub fn validate(&self) -> Result<Cutoff, TorsionError> {
        let lhs = self.target.differential().mul(&self.matrix)?;
        let rhs = self.matrix.mul(self.source.differential())?;
        let diff = lhs.sub(&rhs)?;
        match diff.zero_check() {
            ZeroCheck::Zero { certified } => Ok(certified),
            ZeroCheck::Nonzero { row, col } => Err(TorsionError::NotAChainMap {
                from: self.source.generators()[col].name.clone(),
                to: self.target.generators()[row].name.clone(),
                entry: diff.get(row, col).to_string(),
            }),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap, TorsionError> {
        if *self.target != *next.source {
            return Err(TorsionError::Structure(
                "composition requires matching target and source complexes".into(),
            ));
        }
        Ok(ChainMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: next.matrix.mul(&self.matrix)?,
        })
    }

    /// The map expressed in new bases of source and target:
    /// `T_target⁻¹ · f · T_source`.
    pub fn change_bases(&self, source: &BasisChange, target: &BasisChange) -> Result<ChainMap, TorsionError> {
        let new_source = Arc::new(self.source.change_basis(source)?);
        let new_target = Arc::new(self.target.change_basis(target)?);
        let m = target.inverse().mul(&self.matrix)?.mul(source.forward())?;
        ChainMap::new(new_source, new_target, m)
    }

    /// Mapping cone `C_f = C_target ⊕ C_source[+1]` with differential
    /// `((∂_t, (−1)^{k+1} f), (0, ∂_s))` on cone degree `k`, based by the
    /// target basis followed by the shifted source basis. Generators are
    /// renamed `tgt.<name>` and `src.<name>`.
    pub fn mapping_cone(&self) -> Result<BasedComplex, TorsionError> {
        self.validate()?;
        let grading = self.source.grading();
        let nt = self.target.len();
        let ns = self.source.len();
        let mut gens: Vec<Generator> = self
            .target
            .generators()
            .iter()
            .map(|g| Generator::new(format!("tgt.{}", g.name), g.degree))
            .collect();
        gens.extend(
            self.source
                .generators()
                .iter()
                .map(|g| Generator::new(format!("src.{}", g.name), grading.predecessor(g.degree))),
        );
        let lattice = self.source.lattice().clone();
        let mut d = Matrix::zeros(&lattice, nt + ns, nt + ns);
        let dt = self.target.differential();
        let ds = self.source.differential();
        for (r, c, e) in dt.entries() {
            d.set(r, c, e.clone());
        }
        for (r, c, e) in ds.entries() {
            d.set(nt + r, nt + c, e.clone());
        }
        for (r, c, e) in self.matrix.entries() {
            // Cone degree of the source generator is deg − 1, so the sign
            // (−1)^{k+1} is (−1)^{deg}.
            let v = if self.source.generators()[c].degree.rem_euclid(2) == 1 {
                -e
            } else {
                e.clone()
            };
            d.set(r, nt + c, v);
        }
        BasedComplex::new(lattice, grading, gens, d)
    }

    /// Relative torsion in K̄₁: the Milnor torsion of the cone.
    pub fn relative_torsion_k1(&self, opts: &TorsionOptions) -> Result<BasisChangeClass, TorsionError> {
        let cone = self.mapping_cone()?;
        match cone.torsion(opts) {
            Ok(t) => Ok(t.k1),
            Err(TorsionError::NotAcyclic { .. }) => Err(TorsionError::NotQuasiIsomorphism),
            Err(e) => Err(e),
        }
    }

    pub fn relative_torsion(&self, opts: &TorsionOptions) -> Result<WhiteheadClass, TorsionError> {
        Ok(self.relative_torsion_k1(opts)?.to_whitehead())
    }
}

fn check_degree_shift(
    source: &BasedComplex,
    target: &BasedComplex,
    m: &Matrix,
    shift: i64,
) -> Result<(), TorsionError> {
    let grading = source.grading();
    for (r, c, e) in m.entries() {
        if e.is_zero_below_cutoff() {
            continue;
        }
        let s = &source.generators()[c];
        let t = &target.generators()[r];
        if t.degree != grading.reduce(s.degree + shift) {
            return Err(TorsionError::Structure(format!(
                "entry from '{}' (degree {}) to '{}' (degree {}) is not of degree {shift}",
                s.name, s.degree, t.name, t.degree
            )));
        }
    }
    Ok(())
}

/// Checks the chain-homotopy identity `f − g = ∂_target·H + H·∂_source`
/// for a degree −1 map `H: source → target`.
pub fn homotopy_equivalent(f: &ChainMap, g: &ChainMap, h: &Matrix) -> Result<bool, TorsionError> {
    if *f.source != *g.source || *f.target != *g.target {
        return Err(TorsionError::Structure(
            "homotopic maps must share source and target".into(),
        ));
    }
    if h.rows() != f.target.len() || h.cols() != f.source.len() {
        return Err(TorsionError::Structure(format!(
            "homotopy is {}x{}, expected {}x{}",
            h.rows(),
            h.cols(),
            f.target.len(),
            f.source.len()
        )));
    }
    check_degree_shift(&f.source, &f.target, h, -1)?;
    let lhs = f.matrix.sub(&g.matrix)?;
    let rhs = f
        .target
        .differential()
        .mul(h)?
        .add(&h.mul(f.source.differential())?)?;
    Ok(matches!(lhs.sub(&rhs)?.zero_check(), ZeroCheck::Zero { .. }))
}
