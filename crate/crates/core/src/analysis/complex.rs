use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Minimal complex number for characteristic roots.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn is_real(self) -> bool {
        self.im == 0.0
    }

    pub fn scale(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Add<f64> for Complex {
    type Output = Complex;
    fn add(self, rhs: f64) -> Complex {
        Complex::new(self.re + rhs, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im >= 0.0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}-{}i", self.re, -self.im)
        }
    }
}

/// Roots of `r² + p1·r + p0 = 0`.
///
/// `r1` takes the `+√disc` branch (positive imaginary part for a complex
/// pair). Real roots are computed without cancellation: the root of larger
/// magnitude comes from the quadratic formula and the other from `p0 / r`.
pub fn quadratic_roots(p1: f64, p0: f64) -> (Complex, Complex) {
    let disc = p1 * p1 - 4.0 * p0;
    if disc < 0.0 {
        let re = -p1 / 2.0;
        let im = (-disc).sqrt() / 2.0;
        return (Complex::new(re, im), Complex::new(re, -im));
    }
    let sq = disc.sqrt();
    let sign = if p1 >= 0.0 { 1.0 } else { -1.0 };
    let big = -(p1 + sign * sq) / 2.0;
    if big == 0.0 {
        return (Complex::real(0.0), Complex::real(0.0));
    }
    let small = p0 / big;
    // assign to the ± branches of (-p1 ± sq)/2
    let (plus, minus) = if p1 >= 0.0 {
        (small, big)
    } else {
        (big, small)
    };
    (Complex::real(plus), Complex::real(minus))
}
