//! Coset diagrams of triangle-group actions with exactly two xy-faces.
//!
//! A pair of permutations (x, y) with x an involution defines a coset
//! diagram: x-edges join the points swapped by x and y-edges run around the
//! cycles of y. The canonical rotation system embeds the diagram in an
//! orientable surface whose faces are the y-cycles and the orbits of xy.
//! When xy has exactly two orbits of equal size the diagram is a januarial;
//! this crate constructs januarials (from parameter searches over PL(F_p)
//! and from explicit families), classifies them as simple or general type,
//! and verifies the genus identities relating the two collapsed discs, their
//! common graph and the circuit partitions.
//!
//! Heavy sweeps run data-parallel on rayon by default; build with
//! `--no-default-features` for a fully sequential library.

pub mod census;
pub mod dot;
pub mod embedding;
pub mod families;
pub mod gf;
pub mod hecke;
pub mod mobius;
pub mod par;
pub mod perm;
pub mod poly;
pub mod topology;

pub use embedding::{build_diagram, check_januarial, lemma1_genus, EmbeddedDiagram, TriangleAction};
pub use hecke::{build_action, primitive_roots, solve_params, theta_oracle, HeckeParams};
pub use par::Parallelism;
pub use perm::{Label, Perm, PointSet};
pub use topology::{analyze_action, hecke_genus_formula, Analysis, JanuarialReport};
