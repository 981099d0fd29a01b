use num_complex::Complex64;

use super::density::DensityOperator;
use super::matrix::{ComplexMatrix, ComplexVector};
use crate::error::{invalid, Error, Result};
use crate::STRUCTURAL_TOL;

/// A normalized single-qubit state `a|0⟩ + b|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubitState {
    a: Complex64,
    b: Complex64,
}

impl PureQubitState {
    /// Accepts amplitudes whose squared norm is 1 within 1e-12.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if (norm_sqr - 1.0).abs() > STRUCTURAL_TOL {
            return Err(invalid(format!("squared norm {norm_sqr} is not 1")));
        }
        Ok(Self { a, b })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self {
            a: a / norm,
            b: b / norm,
        })
    }

    pub fn zero() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: Complex64::new(h, 0.0),
            b: Complex64::new(h, 0.0),
        }
    }

    /// The pure state with the given polar and azimuthal Bloch angles,
    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            a: Complex64::new(c, 0.0),
            b: Complex64::from_polar(s, phi),
        }
    }

    /// The pure state pointing along a unit Bloch direction, with a real
    /// non-negative `|0⟩` amplitude.
    pub fn from_direction(s: &BlochVector) -> Result<Self> {
        let len = s.norm();
        if (len - 1.0).abs() > 1e-9 {
            return Err(invalid(format!(
                "Bloch direction has length {len}, expected 1"
            )));
        }
        let z = (s.z / len).clamp(-1.0, 1.0);
        let c = ((1.0 + z) / 2.0).sqrt();
        let sn = ((1.0 - z) / 2.0).sqrt();
        let phi = s.y.atan2(s.x);
        Ok(Self {
            a: Complex64::new(c, 0.0),
            b: Complex64::from_polar(sn, phi),
        })
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    pub fn vector(&self) -> ComplexVector {
        ComplexVector::from_vec(vec![self.a, self.b])
    }

    pub fn projector(&self) -> ComplexMatrix {
        let v = self.vector();
        &v * v.adjoint()
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &PureQubitState) -> f64 {
        (self.a.conj() * other.a + self.b.conj() * other.b).norm_sqr()
    }

    pub fn bloch(&self) -> BlochVector {
        let ab = self.a.conj() * self.b;
        BlochVector::new(
            2.0 * ab.re,
            2.0 * ab.im,
            self.a.norm_sqr() - self.b.norm_sqr(),
        )
    }
}

/// Real 3-vector `s⃗` of `ρ = ½(1l + s⃗·σ⃗)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn scale(&self, k: f64) -> BlochVector {
        BlochVector::new(k * self.x, k * self.y, k * self.z)
    }

    pub fn sub(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, o: &BlochVector) -> f64 {
        let d = self.sub(o);
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    /// Angle between the two vectors in `[0, π]`, via `atan2` so that nearly
    /// parallel vectors keep full precision.
    pub fn angle_to(&self, o: &BlochVector) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }
}

/// Bloch vector `(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z)` of a single-qubit operator.
pub fn bloch_of(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.n_qubits() != 1 {
        return Err(invalid(format!(
            "Bloch vector needs a single-qubit operator, got {} qubits",
            rho.n_qubits()
        )));
    }
    let m = rho.matrix();
    let off = m[(0, 1)];
    Ok(BlochVector::new(
        2.0 * off.re,
        -2.0 * off.im,
        m[(0, 0)].re - m[(1, 1)].re,
    ))
}

/// `½(1l + s⃗·σ⃗)` for `|s⃗| ≤ 1` (within 1e-12).
pub fn state_from_bloch(s: &BlochVector) -> Result<DensityOperator> {
    let len = s.norm();
    if !len.is_finite() || len > 1.0 + STRUCTURAL_TOL {
        return Err(invalid(format!("Bloch vector length {len} exceeds 1")));
    }
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + s.z), 0.0),
            Complex64::new(0.5 * s.x, -0.5 * s.y),
            Complex64::new(0.5 * s.x, 0.5 * s.y),
            Complex64::new(0.5 * (1.0 - s.z), 0.0),
        ],
    );
    DensityOperator::new(m)
}

/// `⟨ψ|ρ|ψ⟩` for a single-qubit `ρ`, clamped to `[0, 1]` against roundoff.
pub fn pure_fidelity(psi: &PureQubitState, rho: &DensityOperator) -> Result<f64> {
    if rho.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: rho.n_qubits(),
        });
    }
    let v = psi.vector();
    let f = (v.adjoint() * rho.matrix() * &v)[(0, 0)].re;
    Ok(f.clamp(0.0, 1.0))
}
