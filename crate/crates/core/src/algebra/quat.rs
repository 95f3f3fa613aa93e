use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A quaternion `re + i·1 + j·2 + k·3`, used as the carrier for real,
/// complex and quaternion entries alike.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat(pub [f64; 4]);

impl Quat {
    pub const ZERO: Quat = Quat([0.0; 4]);
    pub const ONE: Quat = Quat([1.0, 0.0, 0.0, 0.0]);

    pub const fn real(x: f64) -> Self {
        Quat([x, 0.0, 0.0, 0.0])
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Quat([re, im, 0.0, 0.0])
    }

    pub fn re(self) -> f64 {
        self.0[0]
    }

    pub fn conj(self) -> Self {
        let [a, b, c, d] = self.0;
        Quat([a, -b, -c, -d])
    }

    pub fn norm_sq(self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn abs(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        let [a, b, c, d] = self.0;
        Quat([a * s, b * s, c * s, d * s])
    }

    pub fn inverse(self) -> Self {
        self.conj().scale(1.0 / self.norm_sq())
    }

    /// Keeps only the first `beta` real components.
    pub fn project(self, beta: usize) -> Self {
        let mut out = [0.0; 4];
        out[..beta].copy_from_slice(&self.0[..beta]);
        Quat(out)
    }

    pub fn max_abs_component(self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        let (a, b) = (self.0, o.0);
        Quat([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }
}

impl AddAssign for Quat {
    fn add_assign(&mut self, o: Quat) {
        *self = *self + o;
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        let (a, b) = (self.0, o.0);
        Quat([a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]])
    }
}

impl SubAssign for Quat {
    fn sub_assign(&mut self, o: Quat) {
        *self = *self - o;
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

/// Hamilton product.
impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quat([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }
}
