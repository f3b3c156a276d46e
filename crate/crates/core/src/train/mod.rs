//! Joint training of the video and description subnetworks under a
//! margin contrastive loss.

mod grad;
mod loss;
mod pairs;
mod sgd;

pub use grad::{example_loss, finite_diff_check, loss_gradients, Gradients};
pub use loss::{contrastive_loss, PairLabel};
pub use pairs::{sample_pairs, PairExample, PairRecord};
pub use sgd::{sgd_step, sgd_train, TrainConfig, TrainOutcome};
