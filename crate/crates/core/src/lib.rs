//! Intersection combinatorics of exceptional curves on del Pezzo surfaces of
//! degree 1.
//!
//! The crate is organized around the 240 exceptional classes of the Picard
//! lattice and the complete weighted graph they span:
//!
//! * [`picard`] — the classes themselves, the intersection pairing, the
//!   canonical class and the partner involution;
//! * [`weylgraph`] — the weighted graph, the Weyl group W(E8) acting by root
//!   reflections, and orbit machinery on cliques;
//! * [`cliques`] — clique enumeration, isomorphism classification and the
//!   orbit/sub-orbit bookkeeping;
//! * [`field`], [`linalg`] — exact scalar arithmetic (arbitrary-precision
//!   rationals and prime fields) and exact linear algebra, generic over the
//!   scalar type;
//! * [`plane`] — projective points, general position and linear systems of
//!   plane curves with prescribed multiplicities;
//! * [`symbolic`] — sparse multivariate polynomials over the rationals and
//!   the concurrency constraint machinery for the parameterized point
//!   set-ups;
//! * [`search`] — exhaustive finite-field scans and exact-rational
//!   verification of concurrency configurations.

pub mod canon;
pub mod cliques;
pub mod field;
pub mod io;
pub mod linalg;
pub mod picard;
pub mod reference;
pub mod plane;
pub mod search;
pub mod symbolic;
pub mod weylgraph;

