use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Scalar coefficient of an operator term.
///
/// Stays an exact complex rational as long as every input is exact, and
/// degrades to a complex double once any floating-point value enters.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(Complex<BigRational>),
    Float(Complex64),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Exact(Complex::zero())
    }

    pub fn one() -> Self {
        Coeff::Exact(Complex::one())
    }

    pub fn from_int(v: i64) -> Self {
        Coeff::Exact(Complex::new(
            BigRational::from_integer(BigInt::from(v)),
            BigRational::zero(),
        ))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Coeff::Exact(Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        ))
    }

    pub fn float(z: Complex64) -> Self {
        Coeff::Float(z)
    }

    /// Exact binary value of a finite double pair; non-finite input stays a float.
    pub fn from_f64_exact(re: f64, im: f64) -> Self {
        match (BigRational::from_float(re), BigRational::from_float(im)) {
            (Some(r), Some(i)) => Coeff::Exact(Complex::new(r, i)),
            _ => Coeff::Float(Complex64::new(re, im)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(z) => z.is_zero(),
            Coeff::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Coeff::Exact(z) => Complex64::new(
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
            ),
            Coeff::Float(z) => *z,
        }
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(z) if z.im.is_zero() => write!(f, "{}", z.re),
            Coeff::Exact(z) => write!(f, "({} + {}i)", z.re, z.im),
            Coeff::Float(z) => write!(f, "{z}"),
        }
    }
}

impl Add<&Coeff> for &Coeff {
    type Output = Coeff;

    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a + b),
            (a, b) => Coeff::Float(a.to_c64() + b.to_c64()),
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;

    fn add(self, rhs: Coeff) -> Coeff {
        &self + &rhs
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        *self = &*self + rhs;
    }
}

impl Mul<&Coeff> for &Coeff {
    type Output = Coeff;

    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            (a, b) => Coeff::Float(a.to_c64() * b.to_c64()),
        }
    }
}

impl Mul for Coeff {
    type Output = Coeff;

    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        match self {
            Coeff::Exact(z) => Coeff::Exact(-z),
            Coeff::Float(z) => Coeff::Float(-z),
        }
    }
}
