use crate::error::{Error, Result};
use serde::Serialize;

/// Tolerance on `sum w = 1`.
pub const SUM_TOL: f64 = 1e-12;

/// A probability vector on `[t]`; entry `i` is the weight of vertex `i + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Weighting(#[serde(serialize_with = "crate::report::ser_f64_seq")] Vec<f64>);

impl Weighting {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeighting("no vertices".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeighting(format!("entry {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidWeighting(format!("entries sum to {total}")));
        }
        Ok(Weighting(weights))
    }

    /// Scales nonnegative finite entries onto the simplex.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidWeighting("cannot normalize".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Weighting::new(weights)
    }

    pub fn uniform(t: usize) -> Self {
        Weighting(vec![1.0 / t as f64; t])
    }

    /// Uniform on the given 1-based vertices, zero elsewhere.
    pub fn uniform_on(t: usize, support: &[usize]) -> Result<Self> {
        let mut w = vec![0.0; t];
        for &v in support {
            if v == 0 || v > t {
                return Err(Error::VertexOutOfRange { vertex: v, t });
            }
            w[v - 1] = 1.0;
        }
        Weighting::normalized(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight of vertex `x` (1-based).
    pub fn get(&self, x: usize) -> f64 {
        self.0[x - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_decreasing(&self) -> bool {
        self.0.windows(2).all(|p| p[0] >= p[1])
    }

    /// Vertices of positive weight.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.0.len()).filter(|&x| self.0[x - 1] > 0.0).collect()
    }

    /// Vertices sorted by decreasing weight, ties by label.
    pub fn decreasing_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..=self.0.len()).collect();
        order.sort_by(|&a, &b| self.0[b - 1].total_cmp(&self.0[a - 1]).then(a.cmp(&b)));
        order
    }

    pub(crate) fn from_vec_unchecked(w: Vec<f64>) -> Self {
        Weighting(w)
    }
}
