//! Integer 2x2 matrices: trace classification, periodic points of Anosov maps
//! and factorisation into the generators `S`, `T`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::smith_normal_form;
use crate::quadratic::QuadIrrational;

/// An integer 2x2 matrix `(a b; c d)`. Serializes as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl From<[[i64; 2]; 2]> for IntMatrix2 {
    fn from([[a, b], [c, d]]: [[i64; 2]; 2]) -> Self {
        IntMatrix2 { a, b, c, d }
    }
}

impl From<IntMatrix2> for [[i64; 2]; 2] {
    fn from(m: IntMatrix2) -> Self {
        [[m.a, m.b], [m.c, m.d]]
    }
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2::new(1, 0, 0, 1);
    pub const NEG_IDENTITY: IntMatrix2 = IntMatrix2::new(-1, 0, 0, -1);
    /// Arnold's cat map.
    pub const CAT: IntMatrix2 = IntMatrix2::new(2, 1, 1, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// Errors unless the determinant is 1.
    pub fn ensure_sl2(&self) -> Result<()> {
        match self.det() {
            1 => Ok(()),
            det => Err(Error::Determinant(det)),
        }
    }

    pub fn checked_mul(&self, o: &IntMatrix2) -> Result<IntMatrix2> {
        let f = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .ok_or(Error::Overflow("2x2 product"))
        };
        Ok(IntMatrix2 {
            a: f(self.a, o.a, self.b, o.c)?,
            b: f(self.a, o.b, self.b, o.d)?,
            c: f(self.c, o.a, self.d, o.c)?,
            d: f(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn pow(&self, n: u32) -> Result<IntMatrix2> {
        let mut out = IntMatrix2::IDENTITY;
        for _ in 0..n {
            out = out.checked_mul(self)?;
        }
        Ok(out)
    }

    /// Inverse of a determinant-one matrix.
    pub fn sl2_inverse(&self) -> IntMatrix2 {
        IntMatrix2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> IntMatrix2 {
        IntMatrix2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn apply(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.a, self.b, self.c, self.d)
    }
}

/// Parses four integers `"a b c d"` (commas also accepted).
impl FromStr for IntMatrix2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let nums: Vec<i64> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parameter(format!("bad matrix entry {t:?}")))
            })
            .collect::<Result<_>>()?;
        match nums[..] {
            [a, b, c, d] => Ok(IntMatrix2::new(a, b, c, d)),
            _ => Err(Error::Parameter(format!(
                "expected four integers \"a b c d\", got {s:?}"
            ))),
        }
    }
}

/// Generators of SL(2,Z) used in words: `S = (0 -1; 1 0)`, `T = (1 1; 0 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Token {
    #[serde(rename = "S")]
    S,
    #[serde(rename = "T")]
    T,
    #[serde(rename = "T^-1")]
    TInv,
    #[serde(rename = "-I")]
    NegI,
}

impl Token {
    pub const ALL: [Token; 4] = [Token::S, Token::T, Token::TInv, Token::NegI];

    pub fn matrix(self) -> IntMatrix2 {
        match self {
            Token::S => IntMatrix2::new(0, -1, 1, 0),
            Token::T => IntMatrix2::new(1, 1, 0, 1),
            Token::TInv => IntMatrix2::new(1, -1, 0, 1),
            Token::NegI => IntMatrix2::NEG_IDENTITY,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Token::S => "S",
            Token::T => "T",
            Token::TInv => "T^-1",
            Token::NegI => "-I",
        })
    }
}

impl FromStr for Token {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" | "s" => Ok(Token::S),
            "T" | "t" => Ok(Token::T),
            "T^-1" | "Ti" | "t^-1" | "T-" => Ok(Token::TInv),
            "-I" | "-1" | "negI" => Ok(Token::NegI),
            other => Err(Error::Parameter(format!("unknown token {other:?}"))),
        }
    }
}

/// Product of the token matrices, left to right.
pub fn word_product(word: &[Token]) -> IntMatrix2 {
    word.iter().fold(IntMatrix2::IDENTITY, |acc, t| {
        acc.checked_mul(&t.matrix())
            .expect("token products stay small")
    })
}

/// Trace trichotomy of a determinant-one integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TraceClass {
    /// `A^order = I`, `order` in {1, 2, 3, 4, 6}.
    Periodic {
        order: u32,
    },
    /// `sign * A = P (1 shear; 0 1) P^-1` with `P` in SL(2,Z).
    Parabolic {
        shear: i64,
        sign: i8,
        conjugator: IntMatrix2,
    },
    Anosov(AnosovData),
}

/// Exact spectral data of a hyperbolic matrix.
///
/// The eigenvalues of `A` are `sign * lambda` and `sign / lambda`, with `sign`
/// the sign of the trace. Directions are slopes `y / x` of eigenvectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnosovData {
    pub trace: i64,
    pub lambda: QuadIrrational,
    pub lambda_inverse: QuadIrrational,
    pub sign: i8,
    pub unstable_slope: QuadIrrational,
    pub stable_slope: QuadIrrational,
}

impl TraceClass {
    pub fn is_anosov(&self) -> bool {
        matches!(self, TraceClass::Anosov(_))
    }

    pub fn anosov(&self) -> Option<&AnosovData> {
        match self {
            TraceClass::Anosov(a) => Some(a),
            _ => None,
        }
    }
}

pub fn classify(m: &IntMatrix2) -> Result<TraceClass> {
    m.ensure_sl2()?;
    let t = m.trace();
    match t.abs() {
        0 => Ok(TraceClass::Periodic { order: 4 }),
        1 => Ok(TraceClass::Periodic {
            order: if t == 1 { 6 } else { 3 },
        }),
        2 if *m == IntMatrix2::IDENTITY => Ok(TraceClass::Periodic { order: 1 }),
        2 if *m == IntMatrix2::NEG_IDENTITY => Ok(TraceClass::Periodic { order: 2 }),
        2 => {
            let sign: i8 = if t > 0 { 1 } else { -1 };
            let unipotent = if sign > 0 { *m } else { m.neg() };
            let (shear, conjugator) = parabolic_normal_form(&unipotent);
            Ok(TraceClass::Parabolic {
                shear,
                sign,
                conjugator,
            })
        }
        _ => Ok(TraceClass::Anosov(anosov_data(m))),
    }
}

/// For unipotent `B != I`, finds `P` with `P^-1 B P = (1 n; 0 1)`.
fn parabolic_normal_form(b: &IntMatrix2) -> (i64, IntMatrix2) {
    // The fixed line of B is spanned by a primitive vector (p, q).
    let (x, y) = if b.a - 1 != 0 || b.b != 0 {
        (b.b, 1 - b.a)
    } else {
        (b.d - 1, -b.c)
    };
    let g = x.gcd(&y);
    let (p, q) = (x / g, y / g);
    let e = p.extended_gcd(&q);
    // p * e.x + q * e.y = 1, so P = (p -e.y; q e.x) has det 1.
    let conj = IntMatrix2::new(p, -e.y, q, e.x);
    let normal = conj
        .sl2_inverse()
        .checked_mul(b)
        .and_then(|m| m.checked_mul(&conj))
        .expect("small parabolic conjugation");
    debug_assert!(normal.a == 1 && normal.c == 0 && normal.d == 1);
    (normal.b, conj)
}

fn anosov_data(m: &IntMatrix2) -> AnosovData {
    let t = i128::from(m.trace());
    let disc = t * t - 4;
    let lambda = QuadIrrational::new(t.abs(), 1, disc, 2);
    let lambda_inverse = lambda.recip().expect("lambda is nonzero");
    let sign: i8 = if t > 0 { 1 } else { -1 };
    let s = QuadIrrational::from_integer(i128::from(sign), lambda.radicand());
    let a = QuadIrrational::from_integer(i128::from(m.a), lambda.radicand());
    let b_inv = QuadIrrational::from_integer(i128::from(m.b), lambda.radicand())
        .recip()
        .expect("b != 0 for hyperbolic matrices");
    // (A - mu) v = 0 with v = (1, s): s = (mu - a) / b
    let unstable_slope = (s * lambda - a) * b_inv;
    let stable_slope = (s * lambda_inverse - a) * b_inv;
    AnosovData {
        trace: m.trace(),
        lambda,
        lambda_inverse,
        sign,
        unstable_slope,
        stable_slope,
    }
}

/// A point of the torus `(Q/Z)^2` with coordinates in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint(pub Ratio<i128>, pub Ratio<i128>);

impl TorusPoint {
    pub fn new(x: Ratio<i128>, y: Ratio<i128>) -> Self {
        TorusPoint(frac(x), frac(y))
    }
}

fn frac(x: Ratio<i128>) -> Ratio<i128> {
    x - x.floor()
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.to_string(), self.1.to_string()].serialize(serializer)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicPoints {
    pub period: u32,
    pub count: u64,
    pub points: Vec<TorusPoint>,
}

/// All `x` in `(Q/Z)^2` with `A^n x = x`, enumerated exactly via the Smith
/// normal form of `A^n - I`.
pub fn periodic_points(m: &IntMatrix2, n: u32) -> Result<PeriodicPoints> {
    if n == 0 {
        return Err(Error::Parameter("period must be positive".into()));
    }
    if !classify(m)?.is_anosov() {
        return Err(Error::NotAnosov(m.trace().abs()));
    }
    let p = m.pow(n)?;
    let b = vec![
        vec![i128::from(p.a) - 1, i128::from(p.b)],
        vec![i128::from(p.c), i128::from(p.d) - 1],
    ];
    let snf = smith_normal_form(&b);
    let small =
        |x: &num_bigint::BigInt| i128::try_from(x).map_err(|_| Error::Overflow("smith form"));
    let (d1, d2) = (small(&snf.diagonal[0])?, small(&snf.diagonal[1])?);
    let v: Vec<Vec<i128>> = snf
        .v
        .iter()
        .map(|r| r.iter().map(small).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    debug_assert!(d1 > 0 && d2 > 0);
    let count = u64::try_from(d1 * d2).map_err(|_| Error::Overflow("periodic point count"))?;
    let mut points = Vec::with_capacity(count as usize);
    for i in 0..d1 {
        for j in 0..d2 {
            let y0 = Ratio::new(i, d1);
            let y1 = Ratio::new(j, d2);
            let x = y0 * v[0][0] + y1 * v[0][1];
            let y = y0 * v[1][0] + y1 * v[1][1];
            points.push(TorusPoint::new(x, y));
        }
    }
    points.sort();
    points.dedup();
    debug_assert_eq!(points.len() as u64, count);
    Ok(PeriodicPoints {
        period: n,
        count,
        points,
    })
}

/// Factors `A` as a word in `S`, `T`, `T^-1`, `-I` whose left-to-right
/// product is exactly `A`.
///
/// Euclidean reduction on the first column: each round removes a power of
/// `T` from the left, then one `S`.
pub fn decompose_st(m: &IntMatrix2) -> Result<Vec<Token>> {
    m.ensure_sl2()?;
    let mut word = Vec::new();
    let mut rest = *m;
    // Invariant: m = product(word) * rest.
    while rest.c != 0 {
        let k = rest.a.div_euclid(rest.c);
        push_t_power(&mut word, k);
        rest = IntMatrix2::new(rest.a - k * rest.c, rest.b - k * rest.d, rest.c, rest.d);
        // rest = S * (S^-1 rest), S^-1 = (0 1; -1 0)
        word.push(Token::S);
        rest = IntMatrix2::new(rest.c, rest.d, -rest.a, -rest.b);
    }
    if rest.a == -1 {
        word.push(Token::NegI);
        rest = rest.neg();
    }
    debug_assert!(rest.a == 1 && rest.c == 0 && rest.d == 1);
    push_t_power(&mut word, rest.b);
    Ok(word)
}

fn push_t_power(word: &mut Vec<Token>, k: i64) {
    let tok = if k >= 0 { Token::T } else { Token::TInv };
    word.extend(std::iter::repeat_n(tok, k.unsigned_abs() as usize));
}
