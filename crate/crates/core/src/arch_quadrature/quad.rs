use std::num::NonZeroUsize;

use gauss_quad::laguerre::GaussLaguerre;
use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Composite Gauss-Legendre on truncated domains.
    Legendre,
    /// Gauss-Laguerre on half-lines (weight divided out), Legendre elsewhere.
    Laguerre,
}

/// Rule parameters. `radius` is measured in the natural length scale of each axis,
/// so the same spec can be reused for every integral here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub points: usize,
    pub panels: usize,
    pub radius: f64,
    /// Relative tolerance for [`converge`].
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { scheme: Scheme::Legendre, points: 32, panels: 8, radius: 6.0, tol: 1e-9 }
    }
}

impl QuadratureSpec {
    pub fn refined(&self) -> Self {
        match self.scheme {
            Scheme::Legendre => QuadratureSpec { panels: self.panels * 2, radius: self.radius * 1.5, ..*self },
            Scheme::Laguerre => QuadratureSpec {
                points: self.points * 2,
                panels: self.panels * 2,
                radius: self.radius * 1.5,
                ..*self
            },
        }
    }

    /// Nodes and weights on `[a, b]`.
    pub fn interval(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(NonZeroUsize::new(self.points.max(1)).unwrap());
        let panels = self.panels.max(1);
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * self.points);
        for k in 0..panels {
            let lo = a + h * k as f64;
            for (x, w) in gl.iter() {
                out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
        out
    }

    /// Nodes and weights for `int_0^infty`, where `scale` is the decay length of the
    /// integrand. Legendre truncates at `radius * scale`.
    pub fn half_line(&self, scale: f64) -> Vec<(f64, f64)> {
        match self.scheme {
            Scheme::Legendre => self.interval(0.0, self.radius * scale),
            Scheme::Laguerre => {
                let n = NonZeroUsize::new(self.points.max(1)).unwrap();
                let gl = GaussLaguerre::new(n, 0.0.try_into().unwrap());
                gl.iter().map(|(x, w)| (x * scale, w * x.exp() * scale)).collect()
            }
        }
    }
}

/// Result with the refinement error `|I(spec) - I(refined spec)|`, plus any analytic
/// tail bound the caller adds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadValue<T> {
    pub value: T,
    pub error: f64,
}

/// Refines until two successive results agree to `spec.tol` relative to `norm`, or to
/// the absolute `floor` (a roundoff level), at most `max_refinements` times. Returns
/// the finer result of the final pair.
pub fn converge<T: Copy>(
    spec: &QuadratureSpec,
    max_refinements: usize,
    norm: impl Fn(T) -> f64,
    floor: impl Fn(T) -> f64,
    diff: impl Fn(T, T) -> f64,
    mut f: impl FnMut(&QuadratureSpec) -> T,
) -> Result<(QuadValue<T>, QuadratureSpec), f64> {
    let mut cur = *spec;
    let mut prev = f(&cur);
    let mut last_err = f64::INFINITY;
    for _ in 0..max_refinements.max(1) {
        let next_spec = cur.refined();
        let next = f(&next_spec);
        last_err = diff(prev, next);
        if last_err <= (spec.tol * norm(next)).max(floor(next)) {
            return Ok((QuadValue { value: next, error: last_err }, next_spec));
        }
        cur = next_spec;
        prev = next;
    }
    Err(last_err)
}
