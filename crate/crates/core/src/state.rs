//! Two-mode Gaussian states as covariance matrices plus first moments.
//!
//! Quadrature ordering is (q1, p1, q2, p2) and the vacuum quadrature variance
//! is 1 throughout the crate. A state is physical when its covariance matrix
//! satisfies the Robertson-Schrodinger condition, i.e. when both symplectic
//! eigenvalues are at least 1.

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::error::{Error, Result};

/// Relative tolerance for the covariance-matrix symmetry check.
pub const SYMMETRY_RTOL: f64 = 1e-12;
/// Absolute slack used by the physicality and separability predicates.
pub const PHYS_TOL: f64 = 1e-12;
/// Slack used for symplectic-eigenvalue comparisons.
pub const EIG_TOL: f64 = 1e-9;

/// A two-mode Gaussian state: a real symmetric 4x4 covariance matrix and a
/// 4-vector of first moments, both in (q1, p1, q2, p2) ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    cm: Matrix4<f64>,
    mean: Vector4<f64>,
}

impl TwoModeState {
    /// Builds a state, enforcing symmetry of the covariance matrix to
    /// [`SYMMETRY_RTOL`] relative tolerance. The matrix is symmetrized before
    /// storage so downstream algebra sees an exactly symmetric matrix.
    pub fn new(cm: Matrix4<f64>, mean: Vector4<f64>) -> Result<Self> {
        let scale = cm.amax().max(1.0);
        let mut asym: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                asym = asym.max((cm[(i, j)] - cm[(j, i)]).abs());
            }
        }
        if asym > SYMMETRY_RTOL * scale {
            return Err(Error::NotSymmetric(asym / scale));
        }
        if !(cm.iter().all(|x| x.is_finite()) && mean.iter().all(|x| x.is_finite())) {
            return Err(Error::NonFinite("TwoModeState"));
        }
        let sym = (cm + cm.transpose()) * 0.5;
        Ok(Self { cm: sym, mean })
    }

    /// Zero-mean state from a covariance matrix.
    pub fn from_cm(cm: Matrix4<f64>) -> Result<Self> {
        Self::new(cm, Vector4::zeros())
    }

    /// The two-mode vacuum.
    pub fn vacuum() -> Self {
        Self { cm: Matrix4::identity(), mean: Vector4::zeros() }
    }

    pub fn cm(&self) -> &Matrix4<f64> {
        &self.cm
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.mean
    }

    pub fn det(&self) -> f64 {
        self.cm.determinant()
    }

    /// Robertson-Schrodinger physicality: cm positive semidefinite and
    /// nu_minus >= 1 within [`EIG_TOL`]. nu_minus comes from the
    /// singular-value route, which is accurate to machine precision even for
    /// pure states where the invariant quartic degenerates.
    pub fn is_physical(&self) -> bool {
        let eig = self.cm.symmetric_eigenvalues();
        let scale = self.cm.amax().max(1.0);
        if eig.iter().any(|&l| l < -EIG_TOL * scale) {
            return false;
        }
        let (nu_min, _) = self.symplectic_eigenvalues();
        nu_min >= 1.0 - EIG_TOL
    }

    /// Symplectic eigenvalues (nu_minus, nu_plus): the roots of
    /// nu^4 - Delta nu^2 + det(cm) with Delta = det A + det B + 2 det C,
    /// computed as the singular values of the antisymmetric normal matrix
    /// cm^(1/2) Omega cm^(1/2). The singular-value route is exact to machine
    /// precision even where the quartic's discriminant vanishes (equal
    /// eigenvalues, e.g. pure states), where the direct formula loses half
    /// the significant digits.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        symplectic_stable(&self.cm, false)
    }

    /// Symplectic eigenvalues of the partial transpose, which flips the sign
    /// of det C.
    pub fn ptranspose_eigenvalues(&self) -> (f64, f64) {
        symplectic_stable(&self.cm, true)
    }

    /// Applies local symplectics S1 (mode 1) and S2 (mode 2):
    /// cm -> S cm S^T, mean -> S mean with S = S1 (+) S2.
    pub fn apply_local(&self, s1: &Matrix2<f64>, s2: &Matrix2<f64>) -> Self {
        let mut s = Matrix4::zeros();
        s.fixed_view_mut::<2, 2>(0, 0).copy_from(s1);
        s.fixed_view_mut::<2, 2>(2, 2).copy_from(s2);
        let cm = s * self.cm * s.transpose();
        let cm = (cm + cm.transpose()) * 0.5;
        Self { cm, mean: s * self.mean }
    }
}

/// Converts a covariance matrix from the hbar-convention with vacuum
/// variance 1/2 into this crate's vacuum-variance-1 units. The core never
/// mixes conventions internally; convert at the boundary.
pub fn cm_from_half_units(cm: &Matrix4<f64>) -> Matrix4<f64> {
    cm * 2.0
}

/// Inverse of [`cm_from_half_units`].
pub fn cm_to_half_units(cm: &Matrix4<f64>) -> Matrix4<f64> {
    cm * 0.5
}

/// Single-mode phase-space rotation by `theta`.
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Single-mode squeezer diag(e^s, e^-s).
pub fn squeeze(s: f64) -> Matrix2<f64> {
    Matrix2::new(s.exp(), 0.0, 0.0, (-s).exp())
}

/// Determinant form of nu_minus >= 1: Delta >= 2 and det + 1 >= Delta, each
/// with [`PHYS_TOL`] slack scaled to the pre-cancellation magnitude of the
/// invariants (Delta and det are differences of terms of size `magnitude`,
/// so their floating-point noise scales with it, not with their own values).
fn rs_condition(delta: f64, det: f64, magnitude: f64) -> bool {
    let scale = 1.0 + magnitude.abs();
    delta >= 2.0 - PHYS_TOL * scale && det + 1.0 - delta >= -PHYS_TOL * scale
}

fn symplectic_stable(cm: &Matrix4<f64>, ptranspose: bool) -> (f64, f64) {
    // Partial transpose is the congruence by diag(1, 1, 1, -1).
    let mut m = *cm;
    if ptranspose {
        for i in 0..4 {
            m[(i, 3)] = -m[(i, 3)];
            m[(3, i)] = -m[(3, i)];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut sqrt_vals = eig.eigenvalues;
    for v in sqrt_vals.iter_mut() {
        *v = v.max(0.0).sqrt();
    }
    let half =
        eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let omega = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, -1.0, 0.0,
    );
    let n = half * omega * half;
    let sv = n.singular_values();
    // Singular values come in pairs (nu_plus, nu_plus, nu_minus, nu_minus).
    (0.5 * (sv[2] + sv[3]), 0.5 * (sv[0] + sv[1]))
}

/// Simon standard-form parameters (a, b, c_plus, c_minus) of Eq. (3) pattern:
/// diag blocks a*I and b*I, off-diagonal diag(c_plus, c_minus).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormParams {
    pub a: f64,
    pub b: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl StandardFormParams {
    pub fn new(a: f64, b: f64, c_plus: f64, c_minus: f64) -> Self {
        Self { a, b, c_plus, c_minus }
    }

    /// The covariance matrix with this standard-form pattern (zero mean).
    pub fn to_state(&self) -> TwoModeState {
        let m = Matrix4::new(
            self.a, 0.0, self.c_plus, 0.0,
            0.0, self.a, 0.0, self.c_minus,
            self.c_plus, 0.0, self.b, 0.0,
            0.0, self.c_minus, 0.0, self.b,
        );
        TwoModeState { cm: m, mean: Vector4::zeros() }
    }

    pub fn det(&self) -> f64 {
        (self.a * self.b - self.c_plus * self.c_plus)
            * (self.a * self.b - self.c_minus * self.c_minus)
    }

    /// Symplectic eigenvalues straight from the invariants.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        self.nu_from_invariants(false)
    }

    pub fn ptranspose_eigenvalues(&self) -> (f64, f64) {
        self.nu_from_invariants(true)
    }

    fn nu_from_invariants(&self, ptranspose: bool) -> (f64, f64) {
        let det_c = if ptranspose {
            -self.c_plus * self.c_minus
        } else {
            self.c_plus * self.c_minus
        };
        let delta = self.a * self.a + self.b * self.b + 2.0 * det_c;
        let disc = (delta * delta - 4.0 * self.det()).max(0.0);
        let lo = ((delta - disc.sqrt()) * 0.5).max(0.0);
        let hi = ((delta + disc.sqrt()) * 0.5).max(0.0);
        (lo.sqrt(), hi.sqrt())
    }

    /// Robertson-Schrodinger physicality. For the simple form
    /// (c_plus = -c_minus) this is equivalent to the inequality pair
    /// (a-1)(b+1) >= c^2 and (a+1)(b-1) >= c^2; the general form additionally
    /// constrains the product c_plus*c_minus, so the full symplectic
    /// condition is used here, in its cancellation-free determinant form.
    pub fn is_physical(&self) -> bool {
        if !(self.a > 0.0 && self.b > 0.0) {
            return false;
        }
        let ab = self.a * self.b;
        if ab - self.c_plus * self.c_plus < -PHYS_TOL || ab - self.c_minus * self.c_minus < -PHYS_TOL
        {
            return false;
        }
        let delta = self.a * self.a + self.b * self.b + 2.0 * self.c_plus * self.c_minus;
        rs_condition(delta, self.det(), self.invariant_magnitude())
    }

    /// PPT separability: true iff the partially transposed state is physical,
    /// i.e. det + 1 >= Delta-tilde with
    /// Delta-tilde = a^2 + b^2 - 2 c_plus c_minus.
    pub fn is_separable(&self) -> Result<bool> {
        if !self.is_physical() {
            return Err(Error::NonPhysicalState { nu_min: self.symplectic_eigenvalues().0 });
        }
        let delta_t = self.a * self.a + self.b * self.b - 2.0 * self.c_plus * self.c_minus;
        let det = self.det();
        let scale = 1.0 + self.invariant_magnitude();
        Ok(det + 1.0 - delta_t >= -PHYS_TOL * scale)
    }

    /// Size of the terms entering the symplectic invariants; the determinant
    /// combinations cancel down from this magnitude.
    fn invariant_magnitude(&self) -> f64 {
        let ab = self.a * self.b;
        let m2 = (self.a * self.a + self.b * self.b)
            .max(2.0 * (self.c_plus * self.c_minus).abs());
        m2.max(ab * ab)
    }

    /// Brings the correlation pair into the sign/ordering convention
    /// c_plus >= |c_minus|, c_plus >= 0, which local pi and pi/2 rotations
    /// can always reach (they flip both signs jointly or swap the two
    /// entries). All local invariants are untouched; the EPR-aligned
    /// measures assume this orientation.
    pub fn canonicalized(&self) -> Self {
        let big = self.c_plus.abs().max(self.c_minus.abs());
        let small = self.c_plus.abs().min(self.c_minus.abs());
        let det_c = self.c_plus * self.c_minus;
        Self {
            a: self.a,
            b: self.b,
            c_plus: big,
            c_minus: if det_c < 0.0 { -small } else { small },
        }
    }

    /// The special case c_plus = -c_minus, if it applies within `tol`.
    pub fn as_simple(&self, tol: f64) -> Option<SimpleFormParams> {
        if (self.c_plus + self.c_minus).abs() <= tol * (1.0 + self.c_plus.abs().max(self.c_minus.abs())) {
            Some(SimpleFormParams { a: self.a, b: self.b, c: self.c_plus })
        } else {
            None
        }
    }
}

/// The simple-form special case c_plus = -c_minus = c of Eq. (15) pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleFormParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SimpleFormParams {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn to_standard(&self) -> StandardFormParams {
        StandardFormParams::new(self.a, self.b, self.c, -self.c)
    }

    pub fn to_state(&self) -> TwoModeState {
        self.to_standard().to_state()
    }

    /// Physicality inequalities (a-1)(b+1) >= c^2 and (a+1)(b-1) >= c^2,
    /// each with [`PHYS_TOL`] slack scaled to the magnitude of the products
    /// (the slack only absorbs floating-point noise).
    pub fn is_physical(&self) -> bool {
        let c2 = self.c * self.c;
        let scale = 1.0 + (self.a + 1.0) * (self.b + 1.0) + c2;
        self.a >= 0.0
            && self.b >= 0.0
            && (self.a - 1.0) * (self.b + 1.0) - c2 >= -PHYS_TOL * scale
            && (self.a + 1.0) * (self.b - 1.0) - c2 >= -PHYS_TOL * scale
    }

    /// PPT criterion: separable iff a + b + c^2 - 1 <= a*b.
    pub fn is_separable(&self) -> Result<bool> {
        if !self.is_physical() {
            return Err(Error::NonPhysicalState {
                nu_min: self.to_standard().symplectic_eigenvalues().0,
            });
        }
        let c2 = self.c * self.c;
        let scale = 1.0 + self.a * self.b + c2;
        Ok(self.a + self.b + c2 - 1.0 <= self.a * self.b + PHYS_TOL * scale)
    }

    pub fn det(&self) -> f64 {
        let d = self.a * self.b - self.c * self.c;
        d * d
    }
}

/// Pure two-mode squeezed state parameters a = b = cosh 2r, c = sinh 2r.
pub fn tmss(r: f64) -> SimpleFormParams {
    SimpleFormParams::new((2.0 * r).cosh(), (2.0 * r).cosh(), (2.0 * r).sinh())
}

/// Inverse square root of a symmetric positive-definite 2x2 matrix, using
/// sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)).
fn inv_sqrt_spd2(a: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let det = a.determinant();
    if det <= 0.0 || a[(0, 0)] <= 0.0 {
        return Err(Error::DegenerateInvariants(format!(
            "local block not positive definite (det {det:e})"
        )));
    }
    let alpha = det.sqrt();
    let norm = (a.trace() + 2.0 * alpha).sqrt();
    let sqrt_a = (a + Matrix2::identity() * alpha) / norm;
    sqrt_a
        .try_inverse()
        .ok_or_else(|| Error::DegenerateInvariants("singular local square root".into()))
}

/// Reduces an arbitrary physical two-mode covariance matrix to its
/// standard-form parameters: a = sqrt(det A), b = sqrt(det B), and
/// (c_plus, c_minus) with c_plus*c_minus = det C and
/// det(cm) = (ab - c_plus^2)(ab - c_minus^2).
///
/// The reduction is constructive: each local block is brought to a multiple
/// of the identity by the local symplectic sqrt(alpha) A^{-1/2}, after which
/// the cross block is diagonalized by a pair of local rotations (a signed
/// SVD restricted to proper rotations, which preserves det C). This route
/// stays accurate to machine precision in the degenerate case
/// c_plus ~ |c_minus| where extracting the correlations from the scalar
/// invariants alone loses half the significant digits.
///
/// Sign and ordering convention: c_plus >= |c_minus| and c_plus >= 0.
pub fn to_standard_form(state: &TwoModeState) -> Result<StandardFormParams> {
    let cm = state.cm();
    if !state.is_physical() {
        return Err(Error::NonPhysicalState { nu_min: state.symplectic_eigenvalues().0 });
    }
    let block_a = cm.fixed_view::<2, 2>(0, 0).into_owned();
    let block_b = cm.fixed_view::<2, 2>(2, 2).into_owned();
    let block_c = cm.fixed_view::<2, 2>(0, 2).into_owned();
    let a = block_a.determinant().max(0.0).sqrt();
    let b = block_b.determinant().max(0.0).sqrt();
    let s1 = inv_sqrt_spd2(&block_a)? * a.sqrt();
    let s4 = inv_sqrt_spd2(&block_b)? * b.sqrt();
    let c = s1 * block_c * s4.transpose();
    // Two-sided rotation diagonalization of the 2x2 cross block: split into
    // the rotation-like part (E, H) and reflection-like part (F, G); their
    // magnitudes combine into the signed singular values.
    let e = 0.5 * (c[(0, 0)] + c[(1, 1)]);
    let f = 0.5 * (c[(0, 0)] - c[(1, 1)]);
    let g = 0.5 * (c[(0, 1)] + c[(1, 0)]);
    let h = 0.5 * (c[(0, 1)] - c[(1, 0)]);
    let q = e.hypot(h);
    let r = f.hypot(g);
    Ok(StandardFormParams::new(a, b, q + r, q - r))
}
