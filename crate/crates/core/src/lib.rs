//! Algorithms for monoids given by positive homogeneous presentations: the
//! word problem, divisibility, quasi-central and fundamental elements, and
//! conjugacy, with dedicated decision procedures for two families.

pub mod bii;
pub mod conjugacy;
pub mod divisibility;
pub mod engine;
pub mod error;
pub mod family;
pub mod garside;
pub mod gmn;
pub mod presentation;
pub mod word;

pub use engine::{CancellationReport, CancellationViolation, EquivClass, Monoid};
pub use error::{Error, Result};
pub use presentation::{GroupLetter, Presentation, Relation};
pub use word::{Letter, Word};
pub use divisibility::{Bounded, DivisorSet, LcmFailure, Side};
pub use garside::{CentralPower, FundamentalCert, GarsideReport, QuasiCentralCert, QuasiCentralEntry, TamenessReport, Verdict};
pub use conjugacy::{ConjVerdict, GroupNormal, NoReason, OrbitEntry, OrbitState, ProbeOutcome, Transit, TransitCache};
pub use family::{Block, Template, TransitFamily};
pub use bii::{Bii, BiiNormalForm, BiiReduction, LemmaCase, Shape, TableRow};
pub use gmn::{FreeInvariant, Gmn, GmnLemmaCase, GmnNormalForm, GmnReduction, McmFormula, PTrace, PWitness, Part, PropertyPReport, Strata};
