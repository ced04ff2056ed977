//! Knot diagrams as a cipher substrate: planar-diagram and Dowker–Thistlethwaite
//! codes, connected sums, tangle mutation, the Jones polynomial, and a
//! hybrid RSA/knot encryption protocol built from them.

pub mod cli;
pub mod codes;
pub mod diagram;
pub mod invariants;
pub mod moves;
pub mod par;
pub mod protocol;
pub mod table;
pub mod tangle;

pub use codes::{canonical_dt, dt_connected_sum, extract_dt, format_dt, parse_dt, strip_suffix, CodeError, DtCode};
pub use diagram::{
    connected_sum, is_alternating, mirror_diagram, validate_diagram, ArcId, Basepoint, Crossing, Diagram,
    DiagramError, Direction, ValidationReport, Violation,
};
pub use invariants::{jones, kauffman_bracket, writhe, JonesPolynomial, LaurentPolynomial};
pub use moves::{apply_reidemeister, MoveSpec};
pub use par::Parallelism;
pub use tangle::{close_presentation, mutate, rotate_tangle, RotationKind, Tangle, TanglePresentation};
