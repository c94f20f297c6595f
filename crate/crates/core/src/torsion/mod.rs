//! Based Z₂-graded (or finer graded) complexes over Λ, basis-change
//! classes, Milnor torsion, mapping cones and relative torsion.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::series::SeriesError;

mod chain_map;
mod classes;
mod complex;

pub use chain_map::{homotopy_equivalent, ChainMap};
pub use classes::{BasisChangeClass, ClassError, WhiteheadClass};
pub use complex::{
    basis_change_class, BasedComplex, BasisChange, GradedBasis, Generator, Grading,
    HomologyRanks, TorsionOptions, TorsionResult, ValidationReport, DEFAULT_CUTOFF,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("not a complex: ∂² has nonzero entry {entry} from '{from}' to '{to}'")]
    NotAComplex {
        from: String,
        to: String,
        entry: String,
    },
    #[error("not a chain map: ∂f − f∂ has nonzero entry {entry} from '{from}' to '{to}'")]
    NotAChainMap {
        from: String,
        to: String,
        entry: String,
    },
    #[error("complex is not acyclic (Z2 homology ranks {ranks:?})")]
    NotAcyclic { ranks: BTreeMap<i64, usize> },
    #[error("chain map is not a quasi-isomorphism: its mapping cone is not acyclic")]
    NotQuasiIsomorphism,
    #[error("not invertible: {0}")]
    NonInvertible(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Class(#[from] ClassError),
}

impl TorsionError {
    pub fn is_indeterminate(&self) -> bool {
        matches!(
            self,
            TorsionError::Linalg(LinalgError::Indeterminate { .. })
                | TorsionError::Linalg(LinalgError::Series(SeriesError::AmbiguousLeadingTerm { .. }))
                | TorsionError::Series(SeriesError::AmbiguousLeadingTerm { .. })
                | TorsionError::Class(ClassError::Series(SeriesError::AmbiguousLeadingTerm { .. }))
        )
    }
}
