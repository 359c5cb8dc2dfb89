//! Exact engine for bounded complexes of projectives over a quiver algebra:
//! mapping cones, homotopy certificates, triangle degenerations, homotopy
//! pullback/pushout constructions, Grothendieck classes and homology
//! obstructions, all over GF(p) with explicit witnesses.

pub mod algebra;
pub mod complex;
pub mod degeneration;
pub mod demos;
pub mod error;
pub mod grothendieck;
pub mod json;
pub mod linalg;
pub mod morphism;
pub mod obstruction;
pub mod random;
pub mod triangle;

pub use algebra::{Algebra, AlgebraElement, QuiverPresentation};
pub use complex::{Complex, MapMatrix};
pub use degeneration::{DegenerationWitness, NilpotencyCertificate, Side};
pub use error::{Error, Result};
pub use grothendieck::{K0Class, ShiftSum, Tower};
pub use linalg::{FieldElement, Matrix, PrimeField};
pub use morphism::{ChainMap, Homotopy};
pub use triangle::{Triangle, TriangleCertificate};
