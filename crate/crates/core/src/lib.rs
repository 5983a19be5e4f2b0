//! Three-mode parametric optomechanical nonreciprocity.
//!
//! * [`classical`] — mean-field dynamics of one block under intense drive.
//! * [`rwa`] — linear scattering of the dual-block network in the
//!   rotating-wave approximation, plus interference-optimal design.
//! * [`full`] — the same network with counter-rotating terms and vacuum noise.
//! * [`sweep`] — deterministic parallel parameter sweeps over all of the above.

pub mod classical;
pub mod ode;
pub mod linalg;
pub mod rwa;
pub mod full;
pub mod sweep;

pub use classical::{ClassicalParams, ClassicalState, Direction, FixedPoint, ForcingProtocol, SteadyState, Trajectory};
pub use full::{FullNetworkParams, NoiseSpectrumPoint, SidebandConditions, SidebandRow};
pub use rwa::{Metrics, NetworkParams, ScatterResult, Spectrum};
pub use sweep::{Axis, CellStatus, Region, RegionCell, SweepOptions, SweepSpec, SweepTask};
