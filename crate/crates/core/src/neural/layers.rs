use ndarray::{Array1, Array2, Array4, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Identity,
    Relu,
    Sigmoid,
    Tanh,
}

impl Activation {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Self::Identity => z,
            Self::Relu => z.max(0.0),
            Self::Sigmoid => 1.0 / (1.0 + (-z).exp()),
            Self::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation's output `y`.
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Self::Identity => 1.0,
            Self::Relu => f64::from(u8::from(y > 0.0)),
            Self::Sigmoid => y * (1.0 - y),
            Self::Tanh => 1.0 - y * y,
        }
    }
}

/// `y = act(x Wᵀ + b)` with `W` of shape `(outputs, inputs)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub activation: Activation,
}

#[derive(Clone, Debug)]
pub struct DenseCache {
    input: Array2<f64>,
    output: Array2<f64>,
}

impl DenseCache {
    pub fn output(&self) -> &Array2<f64> {
        &self.output
    }
}

impl Dense {
    pub fn forward(&self, w: ArrayView2<f64>, b: ArrayView1<f64>, x: Array2<f64>) -> DenseCache {
        let mut z = x.dot(&w.t());
        z += &b;
        let act = self.activation;
        z.mapv_inplace(|v| act.apply(v));
        DenseCache {
            input: x,
            output: z,
        }
    }

    /// Returns `(dW, db, dx)` for upstream gradient `dy` on the output.
    pub fn backward(
        &self,
        w: ArrayView2<f64>,
        cache: &DenseCache,
        dy: &Array2<f64>,
    ) -> (Array2<f64>, Array1<f64>, Array2<f64>) {
        let act = self.activation;
        let mut dz = dy.clone();
        ndarray::Zip::from(&mut dz)
            .and(&cache.output)
            .for_each(|g, &y| *g *= act.derivative_from_output(y));
        let dw = dz.t().dot(&cache.input);
        let db = dz.sum_axis(Axis(0));
        let dx = dz.dot(&w);
        (dw, db, dx)
    }
}

/// 2-D convolution over `(batch, channels, height, width)` tensors,
/// evaluated as an im2col matrix product. `W` has shape
/// `(out_channels, in_channels · kernel²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conv2d {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
    pub activation: Activation,
}

#[derive(Clone, Debug)]
pub struct ConvCache {
    cols: Array2<f64>,
    input_shape: [usize; 4],
    output: Array4<f64>,
}

impl ConvCache {
    pub fn output(&self) -> &Array4<f64> {
        &self.output
    }
}

impl Conv2d {
    pub fn output_hw(&self, h: usize, w: usize) -> (usize, usize) {
        let f = |n: usize| (n + 2 * self.padding - self.kernel) / self.stride + 1;
        (f(h), f(w))
    }

    pub fn patch_len(&self) -> usize {
        self.in_channels * self.kernel * self.kernel
    }

    /// Input pixel under patch element `(ky, kx)` of output `(oy, ox)`.
    fn source(&self, o: usize, k: usize, n: usize) -> Option<usize> {
        let i = (o * self.stride + k) as isize - self.padding as isize;
        (0..n as isize).contains(&i).then_some(i as usize)
    }

    fn im2col(&self, x: &Array4<f64>) -> Array2<f64> {
        let (b, c, h, w) = x.dim();
        let (oh, ow) = self.output_hw(h, w);
        let k = self.kernel;
        let mut cols = Array2::zeros((b * oh * ow, self.patch_len()));
        for bi in 0..b {
            for oy in 0..oh {
                for ox in 0..ow {
                    let row = (bi * oh + oy) * ow + ox;
                    for ci in 0..c {
                        for ky in 0..k {
                            let Some(iy) = self.source(oy, ky, h) else {
                                continue;
                            };
                            for kx in 0..k {
                                if let Some(ix) = self.source(ox, kx, w) {
                                    cols[[row, (ci * k + ky) * k + kx]] = x[[bi, ci, iy, ix]];
                                }
                            }
                        }
                    }
                }
            }
        }
        cols
    }

    fn col2im(&self, dcols: &Array2<f64>, shape: [usize; 4]) -> Array4<f64> {
        let [b, c, h, w] = shape;
        let (oh, ow) = self.output_hw(h, w);
        let k = self.kernel;
        let mut dx = Array4::zeros((b, c, h, w));
        for bi in 0..b {
            for oy in 0..oh {
                for ox in 0..ow {
                    let row = (bi * oh + oy) * ow + ox;
                    for ci in 0..c {
                        for ky in 0..k {
                            let Some(iy) = self.source(oy, ky, h) else {
                                continue;
                            };
                            for kx in 0..k {
                                if let Some(ix) = self.source(ox, kx, w) {
                                    dx[[bi, ci, iy, ix]] += dcols[[row, (ci * k + ky) * k + kx]];
                                }
                            }
                        }
                    }
                }
            }
        }
        dx
    }

    pub fn forward(&self, w: ArrayView2<f64>, bias: ArrayView1<f64>, x: &Array4<f64>) -> ConvCache {
        let (b, _, h, wd) = x.dim();
        let (oh, ow) = self.output_hw(h, wd);
        let cols = self.im2col(x);
        let mut z = cols.dot(&w.t());
        z += &bias;
        let act = self.activation;
        z.mapv_inplace(|v| act.apply(v));
        let output = z
            .into_shape_with_order((b, oh, ow, self.out_channels))
            .expect("im2col rows cover the output grid")
            .permuted_axes([0, 3, 1, 2])
            .as_standard_layout()
            .into_owned();
        ConvCache {
            cols,
            input_shape: [b, self.in_channels, h, wd],
            output,
        }
    }

    /// Returns `(dW, db, dx)`.
    pub fn backward(
        &self,
        w: ArrayView2<f64>,
        cache: &ConvCache,
        dy: &Array4<f64>,
    ) -> (Array2<f64>, Array1<f64>, Array4<f64>) {
        let act = self.activation;
        let mut dz = dy.clone();
        ndarray::Zip::from(&mut dz)
            .and(&cache.output)
            .for_each(|g, &y| *g *= act.derivative_from_output(y));
        let (b, oc, oh, ow) = dz.dim();
        let dz2 = dz
            .permuted_axes([0, 2, 3, 1])
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((b * oh * ow, oc))
            .expect("contiguous gradient");
        let dw = dz2.t().dot(&cache.cols);
        let db = dz2.sum_axis(Axis(0));
        let dcols = dz2.dot(&w);
        let dx = self.col2im(&dcols, cache.input_shape);
        (dw, db, dx)
    }
}
