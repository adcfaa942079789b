//! Linear interference-alignment schemes for the symmetric deterministic X channel.

pub mod boxes;
pub mod builders;
pub mod chains;
pub mod roundtrip;
pub mod scheme;
pub mod sweep;
pub mod validate;

pub use boxes::{pack_boxes, search_boxes, BoxAssignment, PackedBox};
pub use builders::{
    build_precoder_case3, build_precoder_extended, build_scheme, build_scheme_case1, build_scheme_case2, empty_scheme,
};
pub use chains::{cyclic_decompose, cyclic_decompose_blocks, ChainDecomposition};
pub use roundtrip::{run_det_roundtrip, MessageTuple, RoundTrip};
pub use scheme::{Construction, LinearScheme};
pub use sweep::{run_sweep, SweepConfig, SweepReport, SweepRow};
pub use validate::{validate_linear_scheme, Certificate, ReceiverCertificate};
