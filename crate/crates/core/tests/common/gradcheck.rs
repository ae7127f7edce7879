//! Central-difference gradient checks for layers and composed networks.

use isac_core::math::SimRng;
use isac_core::neural::{Activation, Conv2d, Dense, NetInput, NetSpec, Network};
use ndarray::{Array1, Array2, Array4};

pub const DELTA: f64 = 1e-5;
pub const TOL: f64 = 1e-4;
/// Gradients below this magnitude are compared absolutely; double-precision
/// central differences cannot resolve relative error there.
pub const FLOOR: f64 = 1e-6;

pub const ACTIVATIONS: [Activation; 4] = [
    Activation::Identity,
    Activation::Relu,
    Activation::Sigmoid,
    Activation::Tanh,
];

/// Convolution geometry: `(in, out, kernel, stride, padding, input shape)`.
pub type ConvGeometry = (
    usize,
    usize,
    usize,
    usize,
    usize,
    (usize, usize, usize, usize),
);

pub const CONV_GEOMETRIES: [ConvGeometry; 3] = [
    (2, 3, 3, 2, 1, (2, 2, 7, 6)),
    (3, 2, 3, 1, 0, (1, 3, 5, 5)),
    (1, 4, 2, 2, 1, (2, 1, 4, 7)),
];

pub fn rel_err(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(FLOOR)
}

fn central_difference(x: &mut [f64], i: usize, f: &mut impl FnMut(&[f64]) -> f64) -> f64 {
    let orig = x[i];
    x[i] = orig + DELTA;
    let up = f(x);
    x[i] = orig - DELTA;
    let down = f(x);
    x[i] = orig;
    (up - down) / (2.0 * DELTA)
}

/// Worst relative error over a set of probed coordinates, and the probe count.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckResult {
    pub worst: f64,
    pub probes: usize,
}

impl CheckResult {
    pub fn merge(self, other: Self) -> Self {
        Self {
            worst: self.worst.max(other.worst),
            probes: self.probes + other.probes,
        }
    }
}

/// Checks `probes` randomly chosen coordinates of `analytic` against central
/// differences of `f` around `x`.
pub fn check(
    x: &[f64],
    analytic: &[f64],
    probes: usize,
    rng: &mut SimRng,
    mut f: impl FnMut(&[f64]) -> f64,
) -> CheckResult {
    assert_eq!(x.len(), analytic.len());
    let mut x = x.to_vec();
    let worst = (0..probes)
        .map(|_| {
            let i = rng.index(x.len());
            let numeric = central_difference(&mut x, i, &mut f);
            rel_err(analytic[i], numeric)
        })
        .fold(0.0, f64::max);
    CheckResult { worst, probes }
}

pub fn random_matrix(r: usize, c: usize, rng: &mut SimRng) -> Array2<f64> {
    Array2::from_shape_fn((r, c), |_| rng.uniform(-1.0, 1.0))
}

pub fn random_tensor(shape: (usize, usize, usize, usize), rng: &mut SimRng) -> Array4<f64> {
    Array4::from_shape_fn(shape, |_| rng.uniform(-1.0, 1.0))
}

pub fn flat2(a: &Array2<f64>) -> Vec<f64> {
    a.iter().copied().collect()
}

/// Weight, bias and input gradients of a 5 → 4 dense layer under a random
/// upstream gradient; 40 probes each.
pub fn dense_layer_check(act: Activation, rng: &mut SimRng) -> [CheckResult; 3] {
    let layer = Dense {
        inputs: 5,
        outputs: 4,
        activation: act,
    };
    let w = random_matrix(4, 5, rng);
    let b: Array1<f64> = Array1::from_shape_fn(4, |_| rng.uniform(-1.0, 1.0));
    let x = random_matrix(3, 5, rng);
    let up = random_matrix(3, 4, rng);
    let loss = |w: &Array2<f64>, b: &Array1<f64>, x: &Array2<f64>| {
        (layer.forward(w.view(), b.view(), x.clone()).output() * &up).sum()
    };
    let cache = layer.forward(w.view(), b.view(), x.clone());
    let (dw, db, dx) = layer.backward(w.view(), &cache, &up);

    let ew = check(&flat2(&w), &flat2(&dw), 40, rng, |v| {
        loss(&Array2::from_shape_vec((4, 5), v.to_vec()).unwrap(), &b, &x)
    });
    let eb = check(&b.to_vec(), &db.to_vec(), 40, rng, |v| {
        loss(&w, &Array1::from_vec(v.to_vec()), &x)
    });
    let ex = check(&flat2(&x), &flat2(&dx), 40, rng, |v| {
        loss(&w, &b, &Array2::from_shape_vec((3, 5), v.to_vec()).unwrap())
    });
    [ew, eb, ex]
}

/// Weight (40 probes), bias (20) and input (40) gradients of one convolution.
pub fn conv_layer_check(
    act: Activation,
    (cin, cout, k, stride, pad, shape): ConvGeometry,
    rng: &mut SimRng,
) -> [CheckResult; 3] {
    let conv = Conv2d {
        in_channels: cin,
        out_channels: cout,
        kernel: k,
        stride,
        padding: pad,
        activation: act,
    };
    let w = random_matrix(cout, conv.patch_len(), rng);
    let b: Array1<f64> = Array1::from_shape_fn(cout, |_| rng.uniform(-1.0, 1.0));
    let x = random_tensor(shape, rng);
    let (oh, ow) = conv.output_hw(shape.2, shape.3);
    let up = random_tensor((shape.0, cout, oh, ow), rng);
    let loss = |w: &Array2<f64>, b: &Array1<f64>, x: &Array4<f64>| {
        (conv.forward(w.view(), b.view(), x).output() * &up).sum()
    };
    let cache = conv.forward(w.view(), b.view(), &x);
    let (dw, db, dx) = conv.backward(w.view(), &cache, &up);

    let ew = check(&flat2(&w), &flat2(&dw), 40, rng, |v| {
        loss(
            &Array2::from_shape_vec(w.dim(), v.to_vec()).unwrap(),
            &b,
            &x,
        )
    });
    let eb = check(&b.to_vec(), &db.to_vec(), 20, rng, |v| {
        loss(&w, &Array1::from_vec(v.to_vec()), &x)
    });
    let xs: Vec<f64> = x.iter().copied().collect();
    let dxs: Vec<f64> = dx.iter().copied().collect();
    let ex = check(&xs, &dxs, 40, rng, |v| {
        loss(&w, &b, &Array4::from_shape_vec(shape, v.to_vec()).unwrap())
    });
    [ew, eb, ex]
}

pub fn random_input(spec: &NetSpec, batch: usize, rng: &mut SimRng) -> NetInput {
    let [c, h, w] = spec.channel_shape;
    let channel = Array4::from_shape_fn((batch, c, h, w), |_| rng.uniform(0.0, 1.0));
    let [c, h, w] = spec.position_shape;
    let position = Array4::from_shape_fn((batch, c, h, w), |_| rng.index(3) as f64);
    let action = (spec.action_inputs > 0)
        .then(|| Array2::from_shape_fn((batch, spec.action_inputs), |_| rng.uniform(0.0, 1.0)));
    NetInput {
        channel,
        position,
        action,
    }
}

/// Parameter gradients (`probes` probes) and, for critics, action-input
/// gradients (20 probes) of a freshly initialised network.
pub fn network_gradient_check(
    spec: NetSpec,
    seed: u64,
    probes: usize,
) -> (CheckResult, CheckResult) {
    let mut rng = SimRng::new(seed);
    let net = Network::new(spec.clone(), &mut rng).unwrap();
    let input = random_input(&spec, 3, &mut rng);
    let (y, cache) = net.forward(&input).unwrap();
    let up = random_matrix(y.nrows(), y.ncols(), &mut rng);
    let grads = net.backward(&cache, &up).unwrap();

    let mut probe_net = net.clone();
    let params = check(
        &net.params().flat(),
        &grads.params.flat(),
        probes,
        &mut rng,
        |v| {
            probe_net.params_mut().set_flat(v).unwrap();
            (probe_net.predict(&input).unwrap() * &up).sum()
        },
    );

    let action = match (&input.action, &grads.action) {
        (Some(a), Some(da)) => check(&flat2(a), &flat2(da), 20, &mut rng, |v| {
            let probe = input.with_action(Array2::from_shape_vec(a.dim(), v.to_vec()).unwrap());
            (net.predict(&probe).unwrap() * &up).sum()
        }),
        (None, None) => CheckResult::default(),
        _ => panic!("action gradient presence must follow NetSpec::action_inputs"),
    };
    (params, action)
}
