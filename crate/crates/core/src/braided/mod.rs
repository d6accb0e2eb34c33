//! Braided tensor products of G-algebras over a finite quantum group with an R-matrix.

mod coherence;
mod core;
mod product;

pub use self::coherence::{
    braided_morphism, check_trivial_action, coherence_suite, flip_iso, trivial_side, BraidedMorphism, CoherenceReport,
    FlipIso, IsoReport, TrivialActionReport, TrivialSide, COHERENCE_LABELS, MIXED_LABELS,
};
pub use self::core::{BraidedCore, CoreReport};
pub use self::product::{BraidedAlgebra, NativeRealization, ProductCertificate};
