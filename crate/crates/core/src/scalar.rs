use num_complex::Complex64;

/// Working scalar: a complex number over `f64`. Real mode keeps `im == 0`.
pub type Scalar = Complex64;

pub const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub const ONE: Scalar = Scalar::new(1.0, 0.0);
pub const I: Scalar = Scalar::new(0.0, 1.0);

/// Numerical thresholds that replace exact equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Eigenvalue clustering radius, relative to the matrix norm.
    pub cluster_tol: f64,
    /// Acceptance threshold for relative matrix-equation residuals.
    pub residual_tol: f64,
    /// Relative threshold for numerical rank decisions.
    pub rank_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            cluster_tol: 1e-7,
            residual_tol: 1e-8,
            rank_tol: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(cluster_tol: f64, residual_tol: f64, rank_tol: f64) -> crate::Result<Self> {
        let t = Tolerance {
            cluster_tol,
            residual_tol,
            rank_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("cluster_tol", self.cluster_tol),
            ("residual_tol", self.residual_tol),
            ("rank_tol", self.rank_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::invalid(alloc::format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Lexicographic order on `(re, im)`, used wherever output order must be
/// deterministic.
pub(crate) fn lex_cmp(a: &Scalar, b: &Scalar) -> core::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}
