//! Minimal differentiable building blocks for the actor and critic networks:
//! im2col convolutions, dense layers, elementwise activations, losses, Adam,
//! soft target updates and a bit-exact checkpoint format. Everything is
//! double precision so finite-difference checks stay tight.

mod adam;
mod checkpoint;
mod layers;
mod loss;
mod network;
mod params;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{load_checkpoint, save_checkpoint, spec_hash};
pub use layers::{Activation, Conv2d, ConvCache, Dense, DenseCache};
pub use loss::{mean_output, mse_loss};
pub use network::{ForwardCache, Gradients, NetInput, NetSpec, Network};
pub use params::{soft_update, Param, ParamSet};
