//! Combinatorial models of moduli spaces of tropical curves.
//!
//! The crate enumerates stable graphs of a given genus, builds the
//! generalized simplicial complex of forest-filtered stable graphs, the
//! quotient cubical complexes that sit over its simplices once marked points
//! are added, and the resulting CW complex together with its cell counts,
//! Euler characteristics and mod-2 homology.

pub mod collapse;
pub mod cw;
pub mod delta;
pub mod enumerate;
pub mod error;
pub mod fiber;
pub mod graph;
pub mod iso;
pub mod poly;
pub mod reproduce;
pub mod z2;

pub use collapse::{CollapseCertificate, CollapseConfig, CollapseVerdict, FacePoset};
pub use cw::{Asymptotics, CwCell, CwComplex};
pub use delta::{DeltaComplex, FacetKind};
pub use enumerate::{FilteredClass, StableClass};
pub use error::{Error, Result};
pub use fiber::{CubeOrbit, OrbitImage, SubdividedGraph};
pub use graph::{Contraction, EdgeSet, FilteredGraph, MultiGraph};
pub use iso::{AutGroup, Automorphism, Canonical, CanonicalForm, Isomorphism};
pub use poly::CellPoly;
pub use z2::ChainComplexZ2;
