//! Structural descriptions of lower ideals of series-parallel orders.
//!
//! A lower ideal is given by finitely many forbidden suborders. [`synth`]
//! turns it into a finite table of two-point bits, each bit saying that a
//! chain or antichain sum of two members of smaller ideals (or of the ideal
//! itself, written `R`) stays inside. [`closure`] computes what such a table
//! generates, and [`oracle`] checks the result against direct enumeration.
//!
//! ```
//! use spdesc::{parse_term, synthesize, verify_equivalence};
//!
//! let forbidden = [parse_term("C(*,A(*,*),*)").unwrap()];
//! let desc = synthesize(&forbidden).unwrap();
//! assert!(desc.validate().is_valid());
//! assert!(verify_equivalence(&forbidden, &desc, 6).unwrap().is_equal());
//! ```

pub mod bits;
pub mod closure;
pub mod ideal;
pub mod oracle;
pub mod relation;
pub mod synth;
pub mod term;

pub use bits::{Bit, BitShape, Entry, Label, SchemaError, StructuralDescription, ValidationReport, Violation};
pub use closure::{generate_upto, member_topdown, ClosureError, GeneratedSet};
pub use ideal::{make_ideal, member, parse_obstruction_list, Ideal, IdealClass, IdealKey};
pub use oracle::{brute_embed, diamond_free_shape, forb_upto, verify_equivalence, EquivalenceReport, OracleError};
pub use synth::{synthesize, synthesize_with, SynthConfig, SynthError};
pub use term::{enumerate_sp, is_suborder, parse_term, SpTerm};
