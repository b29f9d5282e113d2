//! Monomial labeled simplicial complexes, the free complexes they support,
//! and decision procedures for free and virtual resolutions over the Cox
//! ring of a smooth toric variety.

pub mod bipyramid;
pub mod chain;
pub mod cli;
pub mod error;
pub mod homology;
pub mod labeled;
pub mod monomial;
pub mod simplicial;
pub mod subdivision;
pub mod virtualcheck;

pub use error::{Error, Result};
pub use homology::Field;
pub use labeled::LabeledComplex;
pub use monomial::{Monomial, MonomialIdeal, ToricContext};
pub use simplicial::{Face, SimplicialComplex};
