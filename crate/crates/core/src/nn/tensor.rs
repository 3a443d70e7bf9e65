//! Dense row-major tensor.

use crate::nn::Real;

/// Contiguous row-major array with a shape. Checkpoints store f32; tests
/// instantiate f64 for finite-difference accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<F> {
    pub shape: Vec<usize>,
    pub data: Vec<F>,
}

impl<F: Real> Tensor<F> {
    pub fn zeros(shape: &[usize]) -> Self {
        let n: usize = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![F::zero(); n],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<F>) -> Self {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "shape/data length mismatch"
        );
        Tensor {
            shape: shape.to_vec(),
            data,
        }
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    /// Rows and columns of a 2-D tensor.
    pub fn dims2(&self) -> (usize, usize) {
        assert_eq!(self.shape.len(), 2, "expected 2-D tensor");
        (self.shape[0], self.shape[1])
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[F] {
        let cols = self.shape[self.shape.len() - 1];
        &self.data[r * cols..(r + 1) * cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [F] {
        let cols = self.shape[self.shape.len() - 1];
        &mut self.data[r * cols..(r + 1) * cols]
    }

    pub fn fill(&mut self, v: F) {
        self.data.iter_mut().for_each(|x| *x = v);
    }

    pub fn zero_out(&mut self) {
        self.fill(F::zero());
    }

    /// Elementwise in-place add (matching shapes).
    pub fn add_assign(&mut self, other: &Tensor<F>) {
        debug_assert_eq!(self.shape, other.shape);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
    }

    /// Multiply every element by a scalar.
    pub fn scale(&mut self, s: F) {
        self.data.iter_mut().for_each(|x| *x = *x * s);
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Dot product of two equal-length slices.
#[inline]
pub fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for i in 0..a.len() {
        acc = acc + a[i] * b[i];
    }
    acc
}

/// y += alpha * x
#[inline]
pub fn axpy<F: Real>(alpha: F, x: &[F], y: &mut [F]) {
    debug_assert_eq!(x.len(), y.len());
    for i in 0..x.len() {
        y[i] = y[i] + alpha * x[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_accounting() {
        let t = Tensor::<f64>::zeros(&[3, 4]);
        assert_eq!(t.numel(), 12);
        assert_eq!(t.dims2(), (3, 4));
        assert_eq!(t.row(2).len(), 4);
    }

    #[test]
    fn add_and_scale() {
        let mut a = Tensor::from_vec(&[2], vec![1.0f64, 2.0]);
        let b = Tensor::from_vec(&[2], vec![0.5, -1.0]);
        a.add_assign(&b);
        a.scale(2.0);
        assert_eq!(a.data, vec![3.0, 2.0]);
    }
}
