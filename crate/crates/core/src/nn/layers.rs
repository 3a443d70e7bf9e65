//! Linear and layer-norm layers plus pointwise activations, each with a
//! hand-written backward pass.

use rand::Rng;

use crate::nn::tensor::{axpy, dot, Tensor};
use crate::nn::{real, Real};

/// Fully connected layer: y = W x + b with W stored [out, in].
#[derive(Debug, Clone)]
pub struct Linear<F> {
    pub w: Tensor<F>,
    pub b: Tensor<F>,
}

impl<F: Real> Linear<F> {
    /// Initialize uniform in +-1/sqrt(fan_in) (weights and biases).
    pub fn init(in_dim: usize, out_dim: usize, rng: &mut impl Rng) -> Self {
        let bound = 1.0 / (in_dim as f64).sqrt();
        let mut w = Tensor::zeros(&[out_dim, in_dim]);
        let mut b = Tensor::zeros(&[out_dim]);
        for v in w.data.iter_mut() {
            *v = real(rng.gen_range(-bound..bound));
        }
        for v in b.data.iter_mut() {
            *v = real(rng.gen_range(-bound..bound));
        }
        Linear { w, b }
    }

    pub fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Linear {
            w: Tensor::zeros(&[out_dim, in_dim]),
            b: Tensor::zeros(&[out_dim]),
        }
    }

    pub fn zeros_like(&self) -> Self {
        Linear {
            w: Tensor::zeros(&self.w.shape),
            b: Tensor::zeros(&self.b.shape),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.w.shape[1]
    }

    pub fn out_dim(&self) -> usize {
        self.w.shape[0]
    }

    /// y[r] = W x[r] + b for each row of a [n, in] matrix.
    pub fn forward_rows(&self, x: &Tensor<F>) -> Tensor<F> {
        let (n, in_dim) = x.dims2();
        debug_assert_eq!(in_dim, self.in_dim());
        let out_dim = self.out_dim();
        let mut y = Tensor::zeros(&[n, out_dim]);
        for r in 0..n {
            let xr = x.row(r);
            let yr = y.row_mut(r);
            for o in 0..out_dim {
                yr[o] = dot(self.w.row(o), xr) + self.b.data[o];
            }
        }
        y
    }

    /// Backward for [`Self::forward_rows`]: accumulates dW, db into `grad`
    /// and returns dL/dx.
    pub fn backward_rows(&self, x: &Tensor<F>, dy: &Tensor<F>, grad: &mut Linear<F>) -> Tensor<F> {
        let (n, in_dim) = x.dims2();
        let out_dim = self.out_dim();
        debug_assert_eq!(dy.dims2(), (n, out_dim));
        let mut dx = Tensor::zeros(&[n, in_dim]);
        for r in 0..n {
            let xr = x.row(r);
            let dyr = dy.row(r);
            let dxr = dx.row_mut(r);
            for o in 0..out_dim {
                let g = dyr[o];
                if g == F::zero() {
                    continue;
                }
                axpy(g, xr, grad.w.row_mut(o));
                grad.b.data[o] = grad.b.data[o] + g;
                axpy(g, self.w.row(o), dxr);
            }
        }
        dx
    }

    /// Single-vector forward.
    pub fn forward_vec(&self, x: &[F]) -> Vec<F> {
        debug_assert_eq!(x.len(), self.in_dim());
        (0..self.out_dim())
            .map(|o| dot(self.w.row(o), x) + self.b.data[o])
            .collect()
    }

    /// Single-vector backward; accumulates into `grad`, returns dL/dx.
    pub fn backward_vec(&self, x: &[F], dy: &[F], grad: &mut Linear<F>) -> Vec<F> {
        let mut dx = vec![F::zero(); self.in_dim()];
        for o in 0..self.out_dim() {
            let g = dy[o];
            if g == F::zero() {
                continue;
            }
            axpy(g, x, grad.w.row_mut(o));
            grad.b.data[o] = grad.b.data[o] + g;
            axpy(g, self.w.row(o), &mut dx);
        }
        dx
    }

    pub fn tensors(&self) -> Vec<&Tensor<F>> {
        vec![&self.w, &self.b]
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor<F>> {
        vec![&mut self.w, &mut self.b]
    }
}

/// Layer normalization over the last dimension with learnable gain/bias.
#[derive(Debug, Clone)]
pub struct LayerNorm<F> {
    pub gain: Tensor<F>,
    pub bias: Tensor<F>,
    pub eps: f64,
}

/// Values cached by the layer-norm forward pass for its backward.
#[derive(Debug)]
pub struct LayerNormCache<F> {
    /// Normalized activations x-hat per row.
    pub xhat: Tensor<F>,
    /// 1/sqrt(var + eps) per row.
    pub inv_std: Vec<F>,
}

impl<F: Real> LayerNorm<F> {
    pub fn new(dim: usize) -> Self {
        let mut gain = Tensor::zeros(&[dim]);
        gain.fill(F::one());
        LayerNorm {
            gain,
            bias: Tensor::zeros(&[dim]),
            eps: 1e-5,
        }
    }

    pub fn zeros_like(&self) -> Self {
        LayerNorm {
            gain: Tensor::zeros(&self.gain.shape),
            bias: Tensor::zeros(&self.bias.shape),
            eps: self.eps,
        }
    }

    pub fn dim(&self) -> usize {
        self.gain.numel()
    }

    pub fn forward_rows(&self, x: &Tensor<F>) -> (Tensor<F>, LayerNormCache<F>) {
        let (n, d) = x.dims2();
        debug_assert_eq!(d, self.dim());
        let mut y = Tensor::zeros(&[n, d]);
        let mut xhat = Tensor::zeros(&[n, d]);
        let mut inv_std = Vec::with_capacity(n);
        let dn = real::<F>(d as f64);
        for r in 0..n {
            let xr = x.row(r);
            let mean = xr.iter().copied().sum::<F>() / dn;
            let mut var = F::zero();
            for &v in xr {
                let c = v - mean;
                var = var + c * c;
            }
            var = var / dn;
            let istd = F::one() / (var + real(self.eps)).sqrt();
            inv_std.push(istd);
            let xh = xhat.row_mut(r);
            let yr = y.row_mut(r);
            for i in 0..d {
                xh[i] = (xr[i] - mean) * istd;
                yr[i] = self.gain.data[i] * xh[i] + self.bias.data[i];
            }
        }
        (y, LayerNormCache { xhat, inv_std })
    }

    pub fn backward_rows(
        &self,
        cache: &LayerNormCache<F>,
        dy: &Tensor<F>,
        grad: &mut LayerNorm<F>,
    ) -> Tensor<F> {
        let (n, d) = dy.dims2();
        let mut dx = Tensor::zeros(&[n, d]);
        let dn = real::<F>(d as f64);
        for r in 0..n {
            let dyr = dy.row(r);
            let xh = cache.xhat.row(r);
            let istd = cache.inv_std[r];
            // dL/dxhat plus the two mean terms of the LN backward.
            let mut sum_dxhat = F::zero();
            let mut sum_dxhat_xhat = F::zero();
            for i in 0..d {
                let dxh = dyr[i] * self.gain.data[i];
                sum_dxhat = sum_dxhat + dxh;
                sum_dxhat_xhat = sum_dxhat_xhat + dxh * xh[i];
                grad.gain.data[i] = grad.gain.data[i] + dyr[i] * xh[i];
                grad.bias.data[i] = grad.bias.data[i] + dyr[i];
            }
            let mean_dxhat = sum_dxhat / dn;
            let mean_dxhat_xhat = sum_dxhat_xhat / dn;
            let dxr = dx.row_mut(r);
            for i in 0..d {
                let dxh = dyr[i] * self.gain.data[i];
                dxr[i] = istd * (dxh - mean_dxhat - xh[i] * mean_dxhat_xhat);
            }
        }
        dx
    }

    pub fn tensors(&self) -> Vec<&Tensor<F>> {
        vec![&self.gain, &self.bias]
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor<F>> {
        vec![&mut self.gain, &mut self.bias]
    }
}

/// ReLU forward (in place).
pub fn relu_forward<F: Real>(x: &mut Tensor<F>) {
    for v in x.data.iter_mut() {
        if *v < F::zero() {
            *v = F::zero();
        }
    }
}

/// ReLU backward given the post-activation output.
pub fn relu_backward<F: Real>(post: &Tensor<F>, dy: &mut Tensor<F>) {
    for (g, &y) in dy.data.iter_mut().zip(&post.data) {
        if y <= F::zero() {
            *g = F::zero();
        }
    }
}

const GELU_C: f64 = 0.797_884_560_802_865_4; // sqrt(2/pi)
const GELU_A: f64 = 0.044715;

/// Tanh-approximation GELU.
#[inline]
pub fn gelu<F: Real>(x: F) -> F {
    let c = real::<F>(GELU_C);
    let a = real::<F>(GELU_A);
    let u = c * (x + a * x * x * x);
    let half = real::<F>(0.5);
    half * x * (F::one() + u.tanh())
}

/// Derivative of the tanh-approximation GELU.
#[inline]
pub fn gelu_deriv<F: Real>(x: F) -> F {
    let c = real::<F>(GELU_C);
    let a = real::<F>(GELU_A);
    let three = real::<F>(3.0);
    let half = real::<F>(0.5);
    let u = c * (x + a * x * x * x);
    let t = u.tanh();
    let sech2 = F::one() - t * t;
    half * (F::one() + t) + half * x * sech2 * c * (F::one() + three * a * x * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_forward_known_values() {
        let mut l = Linear::<f64>::zeros(2, 2);
        l.w.data = vec![1.0, 2.0, 3.0, 4.0]; // [[1,2],[3,4]]
        l.b.data = vec![0.5, -0.5];
        let x = Tensor::from_vec(&[1, 2], vec![1.0, 1.0]);
        let y = l.forward_rows(&x);
        assert_eq!(y.data, vec![3.5, 6.5]);
    }

    #[test]
    fn layernorm_normalizes_rows() {
        let ln = LayerNorm::<f64>::new(4);
        let x = Tensor::from_vec(&[1, 4], vec![1.0, 2.0, 3.0, 4.0]);
        let (y, _) = ln.forward_rows(&x);
        let mean: f64 = y.data.iter().sum::<f64>() / 4.0;
        let var: f64 = y.data.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-4);
    }

    #[test]
    fn init_respects_fan_in_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let l = Linear::<f32>::init(64, 16, &mut rng);
        let bound = 1.0 / (64f32).sqrt();
        assert!(l.w.data.iter().all(|v| v.abs() <= bound));
        assert!(l.b.data.iter().all(|v| v.abs() <= bound));
    }

    #[test]
    fn gelu_matches_reference_points() {
        // Reference values of the tanh-approximation at a few points.
        assert!((gelu(0.0f64)).abs() < 1e-15);
        assert!((gelu(1.0f64) - 0.841192).abs() < 1e-5);
        assert!((gelu(-1.0f64) + 0.158808).abs() < 1e-5);
    }
}
