//! On-disk formats.
//!
//! * Binary matrices: 4-byte magic (`VSF1` for frame features and score
//!   columns, `VSD1` for description vectors), `u32` LE rows, `u32` LE cols,
//!   then `rows * cols` little-endian `f32` values, row-major.
//! * Pair labels: CSV with header `segment_index,desc_index,tn`.
//! * Interval, summary, ROI and checkpoint documents: JSON.

mod checkpoint;
mod docs;
mod matrix_file;

pub use checkpoint::{
    load_checkpoint, save_checkpoint, Checkpoint, CheckpointDims, CHECKPOINT_VERSION,
};
pub use docs::{
    read_intervals, read_json, read_pairs, read_summary, write_json, write_pairs, write_summary,
    IntervalsDoc, RoiDoc, SummaryDoc,
};
pub use matrix_file::{read_matrix, write_matrix, Magic, HEADER_LEN};
