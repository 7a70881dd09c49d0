//! The group algebra `S = R[Z] / (Z^4 - 1)` and its complex counterpart.
//!
//! An element is stored as its four coefficients indexed by `α ∈ Z4`; the
//! monomial `Z^α` stands for the symbol `α`, so multiplying by `Z^β` shifts
//! a likelihood table by `β`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Coefficient types usable in [`Poly4`].
pub trait Coeff:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + AddAssign + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
}

impl Coeff for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
}

impl Coeff for Complex64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly4<T>(pub [T; 4]);

/// Element of `S` with real coefficients.
pub type SPoly = Poly4<f64>;
/// Element of `S` with complex coefficients.
pub type CSPoly = Poly4<Complex64>;

impl<T: Coeff> Default for Poly4<T> {
    fn default() -> Self {
        Poly4([T::zero(); 4])
    }
}

impl<T: Coeff> Poly4<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: T) -> Self {
        Poly4([c, T::zero(), T::zero(), T::zero()])
    }

    pub fn coeffs(&self) -> &[T; 4] {
        &self.0
    }

    /// Multiply by `Z^k`: coefficient `α` moves to `α + k`.
    #[inline]
    pub fn shift(&self, k: u8) -> Self {
        let k = (k & 3) as usize;
        let mut out = [T::zero(); 4];
        for (a, &c) in self.0.iter().enumerate() {
            out[(a + k) & 3] = c;
        }
        Poly4(out)
    }

    /// Multiply by `Z^2`, a rotation of the coefficients by two places.
    #[inline]
    pub fn times_z2(&self) -> Self {
        let [a, b, c, d] = self.0;
        Poly4([c, d, a, b])
    }

    /// Circular convolution of the coefficient arrays.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = [T::zero(); 4];
        for a in 0..4 {
            for b in 0..4 {
                out[(a + b) & 3] += self.0[a] * other.0[b];
            }
        }
        Poly4(out)
    }

    /// Coefficient-wise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Poly4([
            self.0[0] * other.0[0],
            self.0[1] * other.0[1],
            self.0[2] * other.0[2],
            self.0[3] * other.0[3],
        ])
    }

    pub fn scale(&self, s: T) -> Self {
        Poly4(self.0.map(|c| c * s))
    }
}

impl<T: Coeff> Add for Poly4<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Poly4([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl<T: Coeff> AddAssign for Poly4<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl<T: Coeff> Sub for Poly4<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Poly4([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

impl<T: Coeff> Mul for Poly4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.convolve(&rhs)
    }
}

impl SPoly {
    pub fn to_complex(&self) -> CSPoly {
        Poly4(self.0.map(|c| Complex64::new(c, 0.0)))
    }

    /// Index of the largest coefficient, ties broken toward the smaller index.
    pub fn argmax(&self) -> u8 {
        let mut best = 0;
        for a in 1..4 {
            if self.0[a] > self.0[best] {
                best = a;
            }
        }
        best as u8
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `ζ(α) = Z^α`.
pub fn zeta(alpha: u8) -> SPoly {
    let mut c = [0.0; 4];
    c[(alpha & 3) as usize] = 1.0;
    Poly4(c)
}

/// `(-i)^k`, i.e. `ω^{-k}` with `ω = i`.
#[inline]
pub fn omega_inv_pow(k: usize) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Fourier transform over Z4: `F_β = Σ_α ω^{-αβ} f_α` with `ω = i`.
pub fn dft4<T: Coeff + Into<Complex64>>(f: &Poly4<T>) -> CSPoly {
    let mut out = [Complex64::zero(); 4];
    for (beta, o) in out.iter_mut().enumerate() {
        for alpha in 0..4 {
            *o += omega_inv_pow(alpha * beta) * f.0[alpha].into();
        }
    }
    Poly4(out)
}

/// Inverse of [`dft4`]: conjugated kernel, divided by four.
pub fn idft4(f: &CSPoly) -> CSPoly {
    let mut out = [Complex64::zero(); 4];
    for (alpha, o) in out.iter_mut().enumerate() {
        for beta in 0..4 {
            *o += omega_inv_pow(alpha * beta).conj() * f.0[beta];
        }
        *o /= 4.0;
    }
    Poly4(out)
}

/// In-place Walsh-Hadamard transform over `S`, with `Z^2` in place of `-1`.
///
/// Output `l` is `Σ_j Z^{2 <bits(l), bits(j)>} v_j`. Returns the number of
/// butterflies performed, `(N/2) log2 N`.
pub fn fwht<T: Coeff>(v: &mut [Poly4<T>]) -> Result<usize> {
    let n = v.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut butterflies = 0;
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let x = v[j];
                let y = v[j + h];
                v[j] = x + y;
                v[j + h] = x + y.times_z2();
                butterflies += 1;
            }
        }
        h *= 2;
    }
    Ok(butterflies)
}

/// Ordinary real Walsh-Hadamard transform, `out_l = Σ_j (-1)^{<l, j>} v_j`.
pub fn fwht_real(v: &mut [f64]) -> Result<()> {
    let n = v.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let x = v[j];
                let y = v[j + h];
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
        h *= 2;
    }
    Ok(())
}
