//! Frequency-domain photonics: an FDFD solver with PML, a blur-and-project
//! material model, adjoint gradients and the demultiplexer problem.

mod adam;
mod device;
mod fdfd;
mod layout;
mod param;
mod photonics2d;

pub use adam::Adam;
pub use device::{omega_for, Demultiplexer, DeviceEvaluation};
pub use fdfd::{Fdfd, FdfdSystem};
pub use layout::{PhotonicsLayout, Port, DEFAULT_DL, DEFAULT_PML, DEFAULT_SPACE};
pub use param::{
    project, tanh_projection, tanh_projection_derivative, ContinuationSchedule, DiskBlur, ProjectionParams,
};
pub use photonics2d::Photonics2D;
