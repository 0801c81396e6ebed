//! Convolution kernels: exact sumsets, (max,+)/(min,+) of step functions,
//! SMAWK merging of uniform functions, and geometric divisor sets.

pub mod delta_set;
pub mod maxplus;
pub mod minplus;
mod ntt;
mod smawk;
pub mod sumset;
pub mod uniform;

pub use delta_set::{delta_multiple_set, quantize_down};
pub use maxplus::{maxplus_merge, merge_many_stepfns};
pub use minplus::minplus_windowed;
pub use smawk::INF;
pub use sumset::{sumset_1d, sumset_1d_with, sumset_2d, sumset_2d_with, Backend, Point2D};
pub use uniform::{smawk_uniform_merge, UniformFunction};
