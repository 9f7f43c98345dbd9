//! Direct solvers producing synthetic measurements on Γ_a.

mod fd;
mod noise;
mod oracle;

pub use fd::{solve_direct_fd, trace_at_top, FdGrid, FdSolver, ForwardField};
pub use noise::add_noise;
pub use oracle::{flat_layered_oracle, flat_mode_response, FlatLayerSolution};
