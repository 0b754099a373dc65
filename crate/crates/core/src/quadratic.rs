//! Exact arithmetic in real quadratic fields `Q(√D)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Serialize, Serializer};

/// The number `(p + q√D) / r` with `D > 1` squarefree, `r > 0`, `gcd(p, q, r) = 1`.
///
/// Rationals are represented with `q = 0`; their radicand is kept so that
/// arithmetic stays inside one field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadIrrational {
    p: i128,
    q: i128,
    r: i128,
    radicand: i128,
}

/// Squarefree decomposition `n = s^2 * k`, returning `(s, k)`.
pub fn squarefree_part(n: i128) -> (i128, i128) {
    assert!(n > 0);
    let mut s = 1;
    let mut k = n;
    let mut f = 2;
    while f * f <= k {
        while k % (f * f) == 0 {
            k /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, k)
}

impl QuadIrrational {
    /// `(p + q√n) / r` for any positive `n`; square factors of `n` are pulled out.
    pub fn new(p: i128, q: i128, n: i128, r: i128) -> Self {
        assert!(r != 0, "zero denominator");
        let (s, k) = squarefree_part(n);
        Self::normalized(p, q * s, r, k)
    }

    pub fn from_integer(n: i128, radicand: i128) -> Self {
        Self::normalized(n, 0, 1, radicand)
    }

    fn normalized(p: i128, q: i128, r: i128, radicand: i128) -> Self {
        let (p, q) = if radicand == 1 { (p + q, 0) } else { (p, q) };
        let (p, q, r) = if r < 0 { (-p, -q, -r) } else { (p, q, r) };
        QuadIrrational { p, q, r, radicand }.reduce()
    }

    fn reduce(self) -> Self {
        let g = self.p.gcd(&self.q).gcd(&self.r);
        if g <= 1 {
            return self;
        }
        QuadIrrational {
            p: self.p / g,
            q: self.q / g,
            r: self.r / g,
            radicand: self.radicand,
        }
    }

    pub fn rational_part(&self) -> (i128, i128) {
        (self.p, self.r)
    }

    /// Components `(p, q, D, r)`.
    pub fn parts(&self) -> (i128, i128, i128, i128) {
        (self.p, self.q, self.radicand, self.r)
    }

    pub fn radicand(&self) -> i128 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn is_integer(&self, n: i128) -> bool {
        self.q == 0 && self.r == 1 && self.p == n
    }

    /// Galois conjugate `(p - q√D) / r`.
    pub fn conjugate(&self) -> Self {
        QuadIrrational {
            q: -self.q,
            ..*self
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // r / (p + q√D) = r (p - q√D) / (p^2 - q^2 D)
        let norm = self.p * self.p - self.q * self.q * self.radicand;
        Some(Self::normalized(
            self.r * self.p,
            -self.r * self.q,
            norm,
            self.radicand,
        ))
    }

    /// Exact sign of the real number.
    pub fn signum(&self) -> i32 {
        // sign of p + q√D, r > 0
        let sp = self.p.signum();
        let sq = self.q.signum();
        if sq == 0 {
            return sp as i32;
        }
        if sp == 0 || sp == sq {
            return sq as i32;
        }
        match (self.p * self.p).cmp(&(self.q * self.q * self.radicand)) {
            Ordering::Greater => sp as i32,
            Ordering::Less => sq as i32,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.q as f64 * (self.radicand as f64).sqrt()) / self.r as f64
    }

    fn align(&self, other: &Self) -> i128 {
        if self.q == 0 {
            other.radicand
        } else if other.q == 0 || self.radicand == other.radicand {
            self.radicand
        } else {
            panic!("mixing Q(√{}) and Q(√{})", self.radicand, other.radicand)
        }
    }
}

impl Add for QuadIrrational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.align(&o);
        Self::normalized(
            self.p * o.r + o.p * self.r,
            self.q * o.r + o.q * self.r,
            self.r * o.r,
            d,
        )
    }
}

impl Neg for QuadIrrational {
    type Output = Self;
    fn neg(self) -> Self {
        QuadIrrational {
            p: -self.p,
            q: -self.q,
            ..self
        }
    }
}

impl Sub for QuadIrrational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for QuadIrrational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.align(&o);
        Self::normalized(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            self.r * o.r,
            d,
        )
    }
}

impl PartialOrd for QuadIrrational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((*self - *other).signum().cmp(&0))
    }
}

impl fmt::Display for QuadIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.p, self.q) {
            (p, 0) => p.to_string(),
            (0, q) => format!("{}√{}", coeff(q), self.radicand),
            (p, q) if q < 0 => format!("{}-{}√{}", p, coeff(-q), self.radicand),
            (p, q) => format!("{}+{}√{}", p, coeff(q), self.radicand),
        };
        if self.r == 1 {
            f.write_str(&num)
        } else if self.q != 0 && self.p != 0 {
            write!(f, "({})/{}", num, self.r)
        } else {
            write!(f, "{}/{}", num, self.r)
        }
    }
}

fn coeff(q: i128) -> String {
    match q {
        1 => String::new(),
        -1 => "-".into(),
        _ => q.to_string(),
    }
}

#[derive(Serialize)]
struct QuadRepr {
    p: i128,
    q: i128,
    radicand: i128,
    r: i128,
    text: String,
    approx: f64,
}

/// Serialized as `{p, q, radicand, r, text, approx}`; `approx` is informational only.
impl Serialize for QuadIrrational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QuadRepr {
            p: self.p,
            q: self.q,
            radicand: self.radicand,
            r: self.r,
            text: self.to_string(),
            approx: self.to_f64(),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_ratio_squared() {
        let lambda = QuadIrrational::new(3, 1, 5, 2);
        let inv = lambda.recip().unwrap();
        assert_eq!(inv, QuadIrrational::new(3, -1, 5, 2));
        assert!((lambda * inv).is_integer(1));
        assert!((lambda + inv).is_integer(3));
        assert_eq!(lambda.to_string(), "(3+√5)/2");
        assert_eq!(lambda.signum(), 1);
        assert_eq!((inv - QuadIrrational::from_integer(1, 5)).signum(), -1);
    }

    #[test]
    fn squares_pulled_out_of_radicand() {
        let x = QuadIrrational::new(4, 1, 12, 2);
        assert_eq!(x.parts(), (2, 1, 3, 1));
        assert_eq!(x.to_string(), "2+√3");
    }

    proptest! {
        #[test]
        fn field_inverse(p in -50i128..50, q in -50i128..50, r in 1i128..20, d in prop::sample::select(vec![2i128, 3, 5, 7, 21])) {
            let x = QuadIrrational::new(p, q, d, r);
            prop_assume!(!x.is_zero());
            let y = x.recip().unwrap();
            prop_assert!((x * y).is_integer(1));
            prop_assert!(((x.to_f64() * y.to_f64()) - 1.0).abs() < 1e-9);
            prop_assert_eq!(x.signum() as f64, x.to_f64().signum() * if x.to_f64() == 0.0 { 0.0 } else { 1.0 });
        }
    }
}
