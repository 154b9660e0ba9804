//! Extremal-length geometry on the Teichmueller space of the once-punctured
//! torus, identified with the upper half-plane.
//!
//! The crate provides, in closed form where the torus allows it:
//!
//! * measured foliations, intersection numbers and the mapping-class-group
//!   action ([`foliation`]);
//! * extremal lengths, the Teichmueller distance (Kerckhoff formula), the
//!   pluricomplex Green function, Gromov products, Teichmueller rays and the
//!   exhaustion functions `-1/Ext` ([`teich`]);
//! * the Thurston probability measures on the circle of projective measured
//!   foliations, basepoint change and exact Cauchy sampling ([`thurston`]);
//! * the Poisson kernel for pluriharmonic functions, the Busemann cocycle,
//!   the Poisson integral operator, the Green-formula residual and the
//!   derivative/residue averaging identities ([`poisson`]);
//! * adaptive boundary and disk quadrature plus seeded Monte Carlo
//!   ([`quadrature`]);
//! * general train-track combinatorics: switch-condition cones, dimension
//!   counts and Thurston-measure homogeneity sampling ([`traintrack`]).
//!
//! Every identity implemented here is certified numerically by the
//! verification suites in [`verify`]; the `acceptance` integration test runs
//! the full battery at pinned tolerances.

pub mod foliation;
pub mod poisson;
pub mod quadrature;
pub mod report;
pub mod teich;
pub mod testfns;
pub mod thurston;
pub mod traintrack;
pub mod verify;

mod error;

pub use error::CoreError;
pub use foliation::{MappingClass, MeasuredFoliation, Slope};
pub use poisson::{BoundaryFunction, KernelValue};
pub use quadrature::{QuadratureResult, SeedStream};
pub use teich::{GreenValue, QuadraticDifferential, SurfaceType, TorusPoint};
pub use thurston::BoundaryMeasure;
pub use traintrack::{TrainTrackGraph, WeightVector};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
