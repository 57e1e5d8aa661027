//! Three-vector algebra and the scalar-plus-vector multivector algebra.
//!
//! A [`Multivector`] here is the pair `s + v` with a scalar part and a single
//! vector (or pseudovector) part. Its geometric product is the Hamiltonian
//! quaternion product written with inner and cross products only. Pseudovectors
//! are stored exactly like vectors.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use crate::scalar::Real;

/// Cartesian 3-vector on the fixed basis `e1, e2, e3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Real> Vec3<S> {
    #[inline]
    pub const fn new(x: S, y: S, z: S) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero())
    }

    pub fn e1() -> Self {
        Self::new(S::one(), S::zero(), S::zero())
    }

    pub fn e2() -> Self {
        Self::new(S::zero(), S::one(), S::zero())
    }

    pub fn e3() -> Self {
        Self::new(S::zero(), S::zero(), S::one())
    }

    pub fn from_array(a: [S; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [S; 3] {
        [self.x, self.y, self.z]
    }

    /// Inner product `a1 b1 + a2 b2 + a3 b3`.
    #[inline]
    pub fn dot(self, rhs: Self) -> S {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    /// Cross product by the determinant rule.
    #[inline]
    pub fn cross(self, rhs: Self) -> Self {
        Self::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    #[inline]
    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> S {
        // hypot-style scaling is unnecessary at the magnitudes we handle
        self.norm_sq().sqrt()
    }

    /// Unit vector along `self`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > S::zero() && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> S {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn map(self, f: impl Fn(S) -> S) -> Self {
        Self::new(f(self.x), f(self.y), f(self.z))
    }

    /// Promotes the vector to a multivector with zero scalar part.
    pub fn to_multivector(self) -> Multivector<S> {
        Multivector::new(S::zero(), self)
    }
}

impl<S: Real> Add for Vec3<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<S: Real> AddAssign for Vec3<S> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<S: Real> Sub for Vec3<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<S: Real> SubAssign for Vec3<S> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<S: Real> Neg for Vec3<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<S: Real> Mul<S> for Vec3<S> {
    type Output = Self;
    #[inline]
    fn mul(self, k: S) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

impl<S: Real> Div<S> for Vec3<S> {
    type Output = Self;
    #[inline]
    fn div(self, k: S) -> Self {
        Self::new(self.x / k, self.y / k, self.z / k)
    }
}

impl<S> Index<usize> for Vec3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<S: Real> std::iter::Sum for Vec3<S> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<S> {
    pub rows: [Vec3<S>; 3],
}

impl<S: Real> Mat3<S> {
    pub fn from_rows(r0: Vec3<S>, r1: Vec3<S>, r2: Vec3<S>) -> Self {
        Self { rows: [r0, r1, r2] }
    }

    pub fn identity() -> Self {
        Self::from_rows(Vec3::e1(), Vec3::e2(), Vec3::e3())
    }

    pub fn zero() -> Self {
        Self::from_rows(Vec3::zero(), Vec3::zero(), Vec3::zero())
    }

    /// Skew-symmetric matrix `[w]x` such that `[w]x a = w x a`.
    pub fn skew(w: Vec3<S>) -> Self {
        let z = S::zero();
        Self::from_rows(
            Vec3::new(z, -w.z, w.y),
            Vec3::new(w.z, z, -w.x),
            Vec3::new(-w.y, w.x, z),
        )
    }

    /// Rotation by `angle` about `axis` (Rodrigues). `axis` need not be unit.
    pub fn rotation(axis: Vec3<S>, angle: S) -> Self {
        let k = axis.normalized().unwrap_or_else(Vec3::e3);
        let kx = Self::skew(k);
        let kx2 = kx * kx;
        Self::identity() + kx * angle.sin() + kx2 * (S::one() - angle.cos())
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.rows[i][j]
    }

    pub fn col(&self, j: usize) -> Vec3<S> {
        Vec3::new(self.rows[0][j], self.rows[1][j], self.rows[2][j])
    }

    pub fn transpose(&self) -> Self {
        Self::from_rows(self.col(0), self.col(1), self.col(2))
    }

    pub fn mul_vec(&self, v: Vec3<S>) -> Vec3<S> {
        Vec3::new(self.rows[0].dot(v), self.rows[1].dot(v), self.rows[2].dot(v))
    }

    pub fn det(&self) -> S {
        self.rows[0].dot(self.rows[1].cross(self.rows[2]))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        self.rows
            .iter()
            .map(|r| r.max_abs())
            .fold(S::zero(), |a, b| a.max(b))
    }
}

impl<S: Real> Add for Mat3<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_rows(
            self.rows[0] + rhs.rows[0],
            self.rows[1] + rhs.rows[1],
            self.rows[2] + rhs.rows[2],
        )
    }
}

impl<S: Real> Sub for Mat3<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_rows(
            self.rows[0] - rhs.rows[0],
            self.rows[1] - rhs.rows[1],
            self.rows[2] - rhs.rows[2],
        )
    }
}

impl<S: Real> Neg for Mat3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_rows(-self.rows[0], -self.rows[1], -self.rows[2])
    }
}

impl<S: Real> Mul<S> for Mat3<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        Self::from_rows(self.rows[0] * k, self.rows[1] * k, self.rows[2] * k)
    }
}

impl<S: Real> Mul for Mat3<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let c = [rhs.col(0), rhs.col(1), rhs.col(2)];
        let row = |r: Vec3<S>| Vec3::new(r.dot(c[0]), r.dot(c[1]), r.dot(c[2]));
        Self::from_rows(row(self.rows[0]), row(self.rows[1]), row(self.rows[2]))
    }
}

/// Scalar plus (pseudo)vector, equivalent to a Hamiltonian quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Multivector<S> {
    pub s: S,
    pub v: Vec3<S>,
}

impl<S: Real> Multivector<S> {
    #[inline]
    pub const fn new(s: S, v: Vec3<S>) -> Self {
        Self { s, v }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), Vec3::zero())
    }

    pub fn scalar(s: S) -> Self {
        Self::new(s, Vec3::zero())
    }

    /// `(λ + X)(μ + Y) = (λμ − X·Y) + (λY + μX + X×Y)`.
    #[inline]
    pub fn geometric_product(self, rhs: Self) -> Self {
        Self::new(
            self.s * rhs.s - self.v.dot(rhs.v),
            rhs.v * self.s + self.v * rhs.s + self.v.cross(rhs.v),
        )
    }

    /// `(λ + X)* = λ − X`.
    #[inline]
    pub fn conjugate(self) -> Self {
        Self::new(self.s, -self.v)
    }

    pub fn norm_sq(self) -> S {
        self.s * self.s + self.v.norm_sq()
    }

    pub fn norm(self) -> S {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.s.is_finite() && self.v.is_finite()
    }

    /// Applies the multivector to a plain vector, `X ⊗ a`, returning the
    /// vector part. Useful where the scalar part vanishes by construction,
    /// e.g. `u = Ω_r ⊗ r`.
    pub fn apply(self, a: Vec3<S>) -> Multivector<S> {
        self.geometric_product(a.to_multivector())
    }
}

impl<S: Real> Add for Multivector<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.s + rhs.s, self.v + rhs.v)
    }
}

impl<S: Real> Sub for Multivector<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.s - rhs.s, self.v - rhs.v)
    }
}

impl<S: Real> Neg for Multivector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.s, -self.v)
    }
}

impl<S: Real> Mul<S> for Multivector<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        Self::new(self.s * k, self.v * k)
    }
}

/// Geometric product.
impl<S: Real> Mul for Multivector<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.geometric_product(rhs)
    }
}
