//! On-disk formats: flow files, gyro CSV, intrinsics JSON, PNG images and
//! masks, dataset manifests and scheduler test vectors.

mod flow;
mod intrinsics;
mod manifest;
mod png;
mod testvec;
mod trace;

pub use flow::{decode_flow, encode_flow, read_flow, write_flow, FLOW_MAGIC};
pub use intrinsics::{parse_intrinsics, read_intrinsics, write_intrinsics, IntrinsicsRecord};
pub use manifest::{
    format_manifest, parse_manifest, read_manifest, write_manifest, DatasetSample, Manifest,
    PatternRecord, TimingRecord,
};
pub use png::{encode_image, encode_mask, read_image, read_mask, write_image, write_mask};
pub use testvec::{
    build_testvectors, probe_indices, read_testvectors, verify_testvectors, write_testvectors,
    DdimCase, TestVectors, ALPHA_BAR_PROBES,
};
pub use trace::{format_trace, parse_trace, read_trace, write_trace, TRACE_HEADER};
