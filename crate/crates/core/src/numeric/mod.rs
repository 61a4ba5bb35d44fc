//! Small numerical kernels shared by the profile constructors and diagnostics.

pub mod interp;
pub mod ode;
pub mod quad;
pub mod roots;
