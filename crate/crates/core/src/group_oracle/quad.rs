use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i64>;

/// `a + b·√root` with rational `a`, `b`; `root` is 2 or 5.
///
/// Equality is literal on `(a, b, root)`. Mixing roots panics, except that a
/// value with `b = 0` adopts the other operand's root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadRational {
    pub a: Rational,
    pub b: Rational,
    pub root: u8,
}

impl QuadRational {
    pub fn new(a: Rational, b: Rational, root: u8) -> Self {
        assert!(root == 2 || root == 5, "only Q(√2) and Q(√5) are supported");
        QuadRational { a, b, root }
    }

    pub fn rational(a: Rational, root: u8) -> Self {
        QuadRational::new(a, Rational::zero(), root)
    }

    pub fn int(n: i64, root: u8) -> Self {
        QuadRational::rational(Rational::from_integer(n), root)
    }

    pub fn half(n: i64, root: u8) -> Self {
        QuadRational::rational(Rational::new(n, 2), root)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn root_with(&self, other: &Self) -> u8 {
        if self.root == other.root {
            self.root
        } else if self.b.is_zero() {
            other.root
        } else if other.b.is_zero() {
            self.root
        } else {
            panic!("mixing Q(√{}) and Q(√{})", self.root, other.root)
        }
    }
}

impl Add for QuadRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let root = self.root_with(&o);
        QuadRational { a: self.a + o.a, b: self.b + o.b, root }
    }
}

impl Sub for QuadRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for QuadRational {
    type Output = Self;
    fn neg(self) -> Self {
        QuadRational { a: -self.a, b: -self.b, root: self.root }
    }
}

impl Mul for QuadRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let root = self.root_with(&o);
        let d = Rational::from_integer(i64::from(root));
        QuadRational { a: self.a * o.a + self.b * o.b * d, b: self.a * o.b + self.b * o.a, root }
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√{}", self.b, self.root)
        } else {
            write!(f, "{}+{}√{}", self.a, self.b, self.root)
        }
    }
}

/// Quaternion `w + x·i + y·j + z·k` with exact coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quaternion {
    pub w: QuadRational,
    pub x: QuadRational,
    pub y: QuadRational,
    pub z: QuadRational,
}

impl Quaternion {
    pub fn new(w: QuadRational, x: QuadRational, y: QuadRational, z: QuadRational) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn one(root: u8) -> Self {
        let o = QuadRational::int(0, root);
        Quaternion::new(QuadRational::int(1, root), o, o, o)
    }

    pub fn coords(&self) -> [QuadRational; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_coords(c: [QuadRational; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    pub fn norm(&self) -> QuadRational {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Quaternion {
            w: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            x: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            y: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            z: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}
