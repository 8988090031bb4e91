use crate::error::{Error, Result};

/// Ordered collocation points `(ξ_k, η_k)`.
///
/// The uniform grid is time-major: time is the outer (slow) index and space
/// advances fastest, so the sequence is `(1/p, 1/q), (2/p, 1/q), …, (1, 1/q),
/// (1/p, 2/q), …`. The lagged nonlinear iteration depends on this order;
/// this one reproduces the published error tables.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationGrid {
    points: Vec<(f64, f64)>,
    shape: Option<(usize, usize)>,
}

impl CollocationGrid {
    pub fn uniform(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Validation(format!(
                "grid sizes must be positive, got p = {p}, q = {q}"
            )));
        }
        let mut points = Vec::with_capacity(p * q);
        for j in 1..=q {
            for i in 1..=p {
                points.push((i as f64 / p as f64, j as f64 / q as f64));
            }
        }
        Ok(CollocationGrid {
            points,
            shape: Some((p, q)),
        })
    }

    /// Arbitrary point list in `(0,1] × (0,1]`. Distinctness is not checked
    /// here; repeated points surface as a singular Gram matrix.
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation("collocation grid is empty".into()));
        }
        for (k, &(x, t)) in points.iter().enumerate() {
            if !(x > 0.0 && x <= 1.0 && t > 0.0 && t <= 1.0) {
                return Err(Error::Validation(format!(
                    "collocation point {k} = ({x}, {t}) outside (0,1] x (0,1]"
                )));
            }
        }
        Ok(CollocationGrid { points, shape: None })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(p, q)` for uniform grids.
    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    pub fn has_duplicates(&self) -> bool {
        let mut sorted = self.points.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        sorted.windows(2).any(|w| w[0] == w[1])
    }
}
