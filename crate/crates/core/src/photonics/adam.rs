use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

/// Adam with bias correction, used for gradient ascent inside a box.
#[derive(Debug, Clone)]
pub struct Adam {
    pub step_size: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(n: usize, step_size: f64) -> Self {
        Self { step_size, beta1: 0.9, beta2: 0.999, epsilon: 1e-8, m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    /// Moves `x` uphill along `grad`, then clamps to `[lo, hi]`.
    pub fn ascend(&mut self, x: &mut [f64], grad: &[f64], lo: f64, hi: f64) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for i in 0..x.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            x[i] = (x[i] + self.step_size * mh / (vh.sqrt() + self.epsilon)).clamp(lo, hi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_the_step_size() {
        let mut a = Adam::new(2, 0.05);
        let mut x = [0.5, 0.5];
        a.ascend(&mut x, &[3.0, -1e-3], 0.0, 1.0);
        assert!((x[0] - 0.55).abs() < 1e-9);
        assert!((x[1] - 0.45).abs() < 1e-6);
    }
}
