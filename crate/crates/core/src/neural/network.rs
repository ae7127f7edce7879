use ndarray::{concatenate, s, Array1, Array2, Array4, ArrayD, Axis, IxDyn};
use serde::{Deserialize, Serialize};

use super::layers::{Activation, Conv2d, ConvCache, Dense, DenseCache};
use super::params::ParamSet;
use crate::channel::ScenarioConfig;
use crate::env::SPECTRUM_HISTORY;
use crate::error::{dim_mismatch, invalid, Result};
use crate::math::SimRng;

/// Architecture of a two-branch network: one convolutional branch per
/// observation tensor, flattened and concatenated (with the action vector
/// for critics), then a dense trunk and an output head.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetSpec {
    /// `(channels, height, width)` of the channel tensor.
    pub channel_shape: [usize; 3],
    /// `(channels, height, width)` of the position tensor.
    pub position_shape: [usize; 3],
    /// Length of the action vector concatenated before the trunk; 0 for actors.
    pub action_inputs: usize,
    pub conv_layers: usize,
    pub conv_filters: usize,
    pub conv_kernel: usize,
    pub conv_stride: usize,
    pub conv_padding: usize,
    pub hidden: Vec<usize>,
    pub outputs: usize,
    pub head: Activation,
    /// Uniform init half-width of the head; `None` uses fan-in scaling.
    pub head_init: Option<f64>,
}

impl NetSpec {
    fn base(cfg: &ScenarioConfig) -> Self {
        Self {
            channel_shape: [cfg.taps, cfg.max_users, cfg.dictionary_size],
            position_shape: [SPECTRUM_HISTORY, cfg.grid_angle_bins, cfg.grid_range_bins],
            action_inputs: 0,
            conv_layers: 2,
            conv_filters: 8,
            conv_kernel: 3,
            conv_stride: 2,
            conv_padding: 1,
            hidden: vec![128, 128],
            outputs: cfg.action_bits(),
            head: Activation::Sigmoid,
            head_init: None,
        }
    }

    /// Policy network: sigmoid head with one output per action bit.
    pub fn actor(cfg: &ScenarioConfig) -> Self {
        Self::base(cfg)
    }

    /// Q network: the action enters before the trunk; scalar linear head
    /// initialised within ±1e−3.
    pub fn critic(cfg: &ScenarioConfig) -> Self {
        Self {
            action_inputs: cfg.action_bits(),
            outputs: 1,
            head: Activation::Identity,
            head_init: Some(1e-3),
            ..Self::base(cfg)
        }
    }

    fn branch(&self, shape: [usize; 3]) -> (Vec<Conv2d>, [usize; 3]) {
        let mut layers = Vec::with_capacity(self.conv_layers);
        let [mut c, mut h, mut w] = shape;
        for _ in 0..self.conv_layers {
            let conv = Conv2d {
                in_channels: c,
                out_channels: self.conv_filters,
                kernel: self.conv_kernel,
                stride: self.conv_stride,
                padding: self.conv_padding,
                activation: Activation::Relu,
            };
            (h, w) = conv.output_hw(h, w);
            c = self.conv_filters;
            layers.push(conv);
        }
        (layers, [c, h, w])
    }

    fn validate(&self) -> Result<()> {
        if self.outputs == 0 {
            return Err(invalid("net.outputs", "must be at least 1"));
        }
        if self.conv_layers > 0 {
            if self.conv_filters == 0 || self.conv_kernel == 0 || self.conv_stride == 0 {
                return Err(invalid(
                    "net.conv",
                    "filters, kernel and stride must be positive",
                ));
            }
            for (name, shape) in [
                ("channel_shape", self.channel_shape),
                ("position_shape", self.position_shape),
            ] {
                let [_, mut h, mut w] = shape;
                for _ in 0..self.conv_layers {
                    if h + 2 * self.conv_padding < self.conv_kernel
                        || w + 2 * self.conv_padding < self.conv_kernel
                    {
                        return Err(invalid(
                            format!("net.{name}"),
                            "input too small for the convolution stack",
                        ));
                    }
                    h = (h + 2 * self.conv_padding - self.conv_kernel) / self.conv_stride + 1;
                    w = (w + 2 * self.conv_padding - self.conv_kernel) / self.conv_stride + 1;
                }
            }
        }
        if self.hidden.contains(&0) {
            return Err(invalid("net.hidden", "hidden widths must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Layout {
    channel_convs: Vec<(Conv2d, usize, usize)>,
    position_convs: Vec<(Conv2d, usize, usize)>,
    channel_features: [usize; 3],
    position_features: [usize; 3],
    dense: Vec<(Dense, usize, usize)>,
}

fn build_layout(spec: &NetSpec, params: &mut ParamSet, rng: &mut SimRng) -> Layout {
    let mut init = |params: &mut ParamSet, name: String, shape: &[usize], bound: f64| {
        let n: usize = shape.iter().product();
        let data: Vec<f64> = (0..n).map(|_| rng.uniform(-bound, bound)).collect();
        params.push(
            name,
            ArrayD::from_shape_vec(IxDyn(shape), data).expect("shape matches data"),
        )
    };
    let mut convs = |params: &mut ParamSet, prefix: &str, shape: [usize; 3]| {
        let (layers, out) = spec.branch(shape);
        let placed = layers
            .into_iter()
            .enumerate()
            .map(|(i, conv)| {
                let bound = 1.0 / (conv.patch_len() as f64).sqrt();
                let w = init(
                    params,
                    format!("{prefix}.conv{i}.weight"),
                    &[conv.out_channels, conv.patch_len()],
                    bound,
                );
                let b = init(
                    params,
                    format!("{prefix}.conv{i}.bias"),
                    &[conv.out_channels],
                    bound,
                );
                (conv, w, b)
            })
            .collect::<Vec<_>>();
        (placed, out)
    };
    let (channel_convs, channel_features) = convs(params, "channel", spec.channel_shape);
    let (position_convs, position_features) = convs(params, "position", spec.position_shape);

    let mut width = channel_features.iter().product::<usize>()
        + position_features.iter().product::<usize>()
        + spec.action_inputs;
    let mut dense = Vec::with_capacity(spec.hidden.len() + 1);
    let n_layers = spec.hidden.len() + 1;
    for i in 0..n_layers {
        let is_head = i + 1 == n_layers;
        let (outputs, activation) = if is_head {
            (spec.outputs, spec.head)
        } else {
            (spec.hidden[i], Activation::Relu)
        };
        let bound = match (is_head, spec.head_init) {
            (true, Some(b)) => b,
            _ => 1.0 / (width as f64).sqrt(),
        };
        let name = if is_head {
            "head".to_string()
        } else {
            format!("trunk{i}")
        };
        let w = init(params, format!("{name}.weight"), &[outputs, width], bound);
        let b = init(params, format!("{name}.bias"), &[outputs], bound);
        dense.push((
            Dense {
                inputs: width,
                outputs,
                activation,
            },
            w,
            b,
        ));
        width = outputs;
    }
    Layout {
        channel_convs,
        position_convs,
        channel_features,
        position_features,
        dense,
    }
}

/// A batch of observations (and actions, for critics).
#[derive(Clone, Debug)]
pub struct NetInput {
    /// `(batch, N_d, U_max, G_t)`.
    pub channel: Array4<f64>,
    /// `(batch, 3, N_x, N_y)`.
    pub position: Array4<f64>,
    /// `(batch, N_A)`; required iff the network takes actions.
    pub action: Option<Array2<f64>>,
}

impl NetInput {
    pub fn batch(&self) -> usize {
        self.channel.dim().0
    }

    pub fn with_action(&self, action: Array2<f64>) -> Self {
        Self {
            channel: self.channel.clone(),
            position: self.position.clone(),
            action: Some(action),
        }
    }
}

/// Activations retained by [`Network::forward`] for the backward pass.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    channel: Vec<ConvCache>,
    position: Vec<ConvCache>,
    dense: Vec<DenseCache>,
    batch: usize,
}

/// Parameter gradients plus the gradient with respect to the action input.
#[derive(Clone, Debug)]
pub struct Gradients {
    pub params: ParamSet,
    pub action: Option<Array2<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    spec: NetSpec,
    layout: Layout,
    params: ParamSet,
}

impl Network {
    pub fn new(spec: NetSpec, rng: &mut SimRng) -> Result<Self> {
        spec.validate()?;
        let mut params = ParamSet::new();
        let layout = build_layout(&spec, &mut params, rng);
        Ok(Self {
            spec,
            layout,
            params,
        })
    }

    /// Rebuilds a network around existing parameters with a matching layout.
    pub fn from_params(spec: NetSpec, params: ParamSet) -> Result<Self> {
        let mut net = Self::new(spec, &mut SimRng::new(0))?;
        if !net.params.same_layout(&params) {
            return Err(dim_mismatch(
                "Network::from_params",
                net.params.shapes(),
                params.shapes(),
            ));
        }
        net.params = params;
        Ok(net)
    }

    pub fn spec(&self) -> &NetSpec {
        &self.spec
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamSet {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.num_values()
    }

    fn check_input(&self, input: &NetInput) -> Result<()> {
        let b = input.batch();
        let [c, h, w] = self.spec.channel_shape;
        if input.channel.dim() != (b, c, h, w) {
            return Err(dim_mismatch(
                "Network::forward channel",
                (b, c, h, w),
                input.channel.dim(),
            ));
        }
        let [c, h, w] = self.spec.position_shape;
        if input.position.dim() != (b, c, h, w) {
            return Err(dim_mismatch(
                "Network::forward position",
                (b, c, h, w),
                input.position.dim(),
            ));
        }
        match (&input.action, self.spec.action_inputs) {
            (None, 0) => Ok(()),
            (Some(a), n) if n > 0 && a.dim() == (b, n) => Ok(()),
            (a, n) => Err(dim_mismatch(
                "Network::forward action",
                (b, n),
                a.as_ref().map(|a| a.dim()),
            )),
        }
    }

    fn run_branch(
        &self,
        convs: &[(Conv2d, usize, usize)],
        x: &Array4<f64>,
    ) -> (Vec<ConvCache>, Array2<f64>) {
        let mut caches: Vec<ConvCache> = Vec::with_capacity(convs.len());
        for (conv, w, b) in convs {
            let input = caches.last().map_or(x, |c| c.output());
            let cache = conv.forward(self.params.matrix(*w), self.params.vector(*b), input);
            caches.push(cache);
        }
        let out = caches.last().map_or(x, |c| c.output());
        let batch = out.dim().0;
        let flat = out
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((batch, out.len() / batch.max(1)))
            .expect("contiguous features");
        (caches, flat)
    }

    pub fn forward(&self, input: &NetInput) -> Result<(Array2<f64>, ForwardCache)> {
        self.check_input(input)?;
        let (channel, fh) = self.run_branch(&self.layout.channel_convs, &input.channel);
        let (position, fp) = self.run_branch(&self.layout.position_convs, &input.position);
        let mut parts = vec![fh.view(), fp.view()];
        if let Some(a) = &input.action {
            parts.push(a.view());
        }
        let mut x = concatenate(Axis(1), &parts).expect("feature batches agree");
        let mut dense = Vec::with_capacity(self.layout.dense.len());
        for (layer, w, b) in &self.layout.dense {
            let cache = layer.forward(self.params.matrix(*w), self.params.vector(*b), x);
            x = cache.output().clone();
            dense.push(cache);
        }
        Ok((
            x,
            ForwardCache {
                channel,
                position,
                dense,
                batch: input.batch(),
            },
        ))
    }

    pub fn predict(&self, input: &NetInput) -> Result<Array2<f64>> {
        self.forward(input).map(|(y, _)| y)
    }

    fn backprop_branch(
        &self,
        convs: &[(Conv2d, usize, usize)],
        caches: &[ConvCache],
        features: [usize; 3],
        batch: usize,
        dflat: Array2<f64>,
        grads: &mut ParamSet,
    ) {
        if convs.is_empty() {
            return;
        }
        let [c, h, w] = features;
        let mut dy = dflat
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((batch, c, h, w))
            .expect("feature count matches branch output");
        for ((conv, wi, bi), cache) in convs.iter().zip(caches).rev() {
            let (dw, db, dx) = conv.backward(self.params.matrix(*wi), cache, &dy);
            grads.matrix_mut(*wi).assign(&dw);
            grads.vector_mut(*bi).assign(&db);
            dy = dx;
        }
    }

    /// Reverse pass for upstream gradient `dy` on the outputs.
    pub fn backward(&self, cache: &ForwardCache, dy: &Array2<f64>) -> Result<Gradients> {
        if dy.dim() != (cache.batch, self.spec.outputs) {
            return Err(dim_mismatch(
                "Network::backward",
                (cache.batch, self.spec.outputs),
                dy.dim(),
            ));
        }
        let mut grads = self.params.zeros_like();
        let mut g = dy.clone();
        for ((layer, wi, bi), dc) in self.layout.dense.iter().zip(&cache.dense).rev() {
            let (dw, db, dx): (Array2<f64>, Array1<f64>, Array2<f64>) =
                layer.backward(self.params.matrix(*wi), dc, &g);
            grads.matrix_mut(*wi).assign(&dw);
            grads.vector_mut(*bi).assign(&db);
            g = dx;
        }
        let nh: usize = self.layout.channel_features.iter().product();
        let np: usize = self.layout.position_features.iter().product();
        let dh = g.slice(s![.., ..nh]).to_owned();
        let dp = g.slice(s![.., nh..nh + np]).to_owned();
        let action = (self.spec.action_inputs > 0).then(|| g.slice(s![.., nh + np..]).to_owned());
        self.backprop_branch(
            &self.layout.channel_convs,
            &cache.channel,
            self.layout.channel_features,
            cache.batch,
            dh,
            &mut grads,
        );
        self.backprop_branch(
            &self.layout.position_convs,
            &cache.position,
            self.layout.position_features,
            cache.batch,
            dp,
            &mut grads,
        );
        Ok(Gradients {
            params: grads,
            action,
        })
    }
}
