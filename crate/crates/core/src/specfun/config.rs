use crate::error::{domain, Result};
use crate::scalar::{cst, Real};

/// Tolerances and iteration caps shared by quadrature and root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_iter: usize,
    /// Maximum number of intervals an adaptive quadrature may split into.
    pub max_subdivisions: usize,
}

impl<T: Real> Default for NumericConfig<T> {
    /// `rel_tol = 1e-10`, `abs_tol = 1e-14`, `max_iter = 200`, `max_subdivisions = 60`.
    ///
    /// For scalar types coarser than `f64` the relative tolerance is raised to
    /// `64 * epsilon` so that it remains attainable.
    fn default() -> Self {
        let floor = T::epsilon() * cst(64.0);
        Self {
            rel_tol: cst::<T>(1e-10).max(floor),
            abs_tol: cst(1e-14),
            max_iter: 200,
            max_subdivisions: 60,
        }
    }
}

impl<T: Real> NumericConfig<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_iter: usize, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_iter,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return Err(domain("NumericConfig", "rel_tol must be > 0"));
        }
        if !(self.abs_tol >= T::zero()) {
            return Err(domain("NumericConfig", "abs_tol must be >= 0"));
        }
        if self.max_iter == 0 || self.max_subdivisions == 0 {
            return Err(domain(
                "NumericConfig",
                "max_iter and max_subdivisions must be >= 1",
            ));
        }
        Ok(())
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// `max(abs_tol, rel_tol * |value|)`.
    pub fn tolerance_for(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}
