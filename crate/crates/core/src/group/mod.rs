//! Finite quantum groups as concrete matrix data.

mod quantum;
mod table;

pub use quantum::{BicharacterResidual, FiniteQuantumGroup, GroupDiagnostics, HeisenbergPair, QuantumGroupParts, Spectrum};
pub use table::{root_of_unity, CharacterTable, GroupTable};
