//! Numerical experiments with circle maps and affine pseudogroups.
//!
//! The circle is `R/Z`. A matrix in SL(2,R) acts on it through lines in the
//! plane: `x` is the line at angle `πx`, so the rotation matrix by angle `φ`
//! moves `x` by `φ/π`, and the hyperbolic rotation by `θ` about the centre
//! of the disc (matrix rotation by `θ/2`) has rotation number `θ/2π`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;
use serde::Serialize;

use crate::error::{Error, Result};

/// Threshold below which `|f(x) - x|` counts as a fixed point.
pub const FIXED_TOLERANCE: f64 = 1e-9;
/// Threshold on the circular deviation in commutator checks.
pub const DEVIATION_TOLERANCE: f64 = 1e-6;
/// Default seed when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// An element of SL(2,R), normalized to determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Rescales by `1/sqrt(det)`; the determinant must be positive.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if det.is_nan() || det <= 0.0 || !det.is_finite() {
            return Err(Error::Generator(format!(
                "Möbius matrix needs positive determinant, got {det}"
            )));
        }
        let s = det.sqrt();
        let m = Mobius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        if (m.det() - 1.0).abs() > 1e-12 {
            return Err(Error::Generator(format!(
                "cannot normalize to determinant 1 (got {})",
                m.det()
            )));
        }
        Ok(m)
    }

    /// Rotation of the plane by angle `phi`.
    pub fn planar_rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Mobius {
            a: c,
            b: -s,
            c: s,
            d: c,
        }
    }

    /// The circle rotation `x -> x + alpha`.
    pub fn rotation(alpha: f64) -> Self {
        Self::planar_rotation(std::f64::consts::PI * alpha)
    }

    /// Elliptic element rotating the disc by `theta` about its centre.
    pub fn elliptic(theta: f64) -> Self {
        Self::planar_rotation(theta / 2.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Matrix product `self * other`: `other` acts first.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `p * self * p^-1`.
    pub fn conjugate_by(&self, p: &Mobius) -> Mobius {
        p.compose(self).compose(&p.inverse())
    }

    /// `self * o * self^-1 * o^-1`.
    pub fn commutator(&self, o: &Mobius) -> Mobius {
        self.compose(o)
            .compose(&self.inverse())
            .compose(&o.inverse())
    }

    pub fn apply(&self, x: f64) -> f64 {
        let (s, c) = (std::f64::consts::PI * x).sin_cos();
        let (u, v) = (self.a * c + self.b * s, self.c * c + self.d * s);
        circle(v.atan2(u) / std::f64::consts::PI)
    }

    /// A continuous lift to `R` commuting with `x -> x + 1`.
    ///
    /// Writing `M = K(θ) U` with `K` a rotation and `U` upper triangular with
    /// positive diagonal, `U` fixes the line `x = 0` and moves every other
    /// line by less than half a turn, so its lift is read off directly.
    pub fn lift(&self, x: f64) -> f64 {
        let theta = self.c.atan2(self.a);
        let k = Mobius::planar_rotation(-theta);
        let u = k.compose(self);
        let frac = x - x.floor();
        let (s, c) = (std::f64::consts::PI * frac).sin_cos();
        let (p, q) = (u.a * c + u.b * s, u.d * s);
        let moved = q.atan2(p) / std::f64::consts::PI;
        x + (moved - frac) + theta / std::f64::consts::PI
    }
}

/// Reduces to `[0, 1)`.
pub fn circle(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on `R/Z`.
pub fn circular_distance(x: f64, y: f64) -> f64 {
    let t = circle(x - y);
    t.min(1.0 - t)
}

/// `x -> 2^k x + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    pub k: i32,
    pub b: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { k: 0, b: 0.0 };

    pub fn apply(&self, x: f64) -> f64 {
        2f64.powi(self.k) * x + self.b
    }

    /// `self ∘ other`: `other` acts first. Exact in `k`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            k: self.k + other.k,
            b: 2f64.powi(self.k) * other.b + self.b,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap {
            k: -self.k,
            b: -self.b * 2f64.powi(-self.k),
        }
    }

    /// The unique fixed point `b / (1 - 2^k)`, for `k != 0`.
    pub fn fixed_point(&self) -> Option<f64> {
        (self.k != 0).then(|| self.b / (1.0 - 2f64.powi(self.k)))
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0 && self.b.abs() < FIXED_TOLERANCE
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lin = match self.k {
            0 => "x".to_string(),
            1 => "2x".to_string(),
            k => format!("2^{k} x"),
        };
        if self.b == 0.0 {
            write!(f, "x -> {lin}")
        } else if self.b < 0.0 {
            write!(f, "x -> {lin} - {}", -self.b)
        } else {
            write!(f, "x -> {lin} + {}", self.b)
        }
    }
}

/// A generator of a circle pseudogroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleGen {
    Rotation { angle: f64 },
    Doubling,
    Mobius(Mobius),
    AffineLine(AffineMap),
}

impl CircleGen {
    pub fn rotation(angle: f64) -> Self {
        CircleGen::Rotation {
            angle: circle(angle),
        }
    }

    pub fn affine(k: i32, b: f64) -> Self {
        CircleGen::AffineLine(AffineMap { k, b })
    }

    /// Action on `R/Z`. Affine maps with `k < 0` are not maps of the circle.
    pub fn apply(&self, x: f64) -> Result<f64> {
        Ok(match self {
            CircleGen::Rotation { angle } => circle(x + angle),
            CircleGen::Doubling => circle(2.0 * x),
            CircleGen::Mobius(m) => m.apply(x),
            CircleGen::AffineLine(a) if a.k >= 0 => circle(a.apply(x)),
            CircleGen::AffineLine(a) => {
                return Err(Error::Generator(format!(
                    "{a} does not descend to the circle"
                )))
            }
        })
    }

    /// A lift to `R` commuting with integer translation, for homeomorphisms.
    pub fn lift(&self, x: f64) -> Result<f64> {
        match self {
            CircleGen::Rotation { angle } => Ok(x + angle),
            CircleGen::Mobius(m) => Ok(m.lift(x)),
            CircleGen::AffineLine(a) if a.k == 0 => Ok(x + a.b),
            CircleGen::Doubling => Err(Error::Generator(
                "the doubling map is not invertible and has no rotation number".into(),
            )),
            CircleGen::AffineLine(a) => Err(Error::Generator(format!(
                "{a} is not a circle homeomorphism"
            ))),
        }
    }
}

impl fmt::Display for CircleGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleGen::Rotation { angle } => write!(f, "rot:{angle}"),
            CircleGen::Doubling => write!(f, "dbl"),
            CircleGen::Mobius(m) => write!(f, "mob:{},{},{},{}", m.a, m.b, m.c, m.d),
            CircleGen::AffineLine(a) => write!(f, "aff:k={},b={}", a.k, a.b),
        }
    }
}

/// `rot:<angle>`, `dbl`, `aff:k=<int>,b=<real>`, `mob:<a>,<b>,<c>,<d>`.
impl FromStr for CircleGen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Generator(format!("cannot parse generator {s:?}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "dbl" if rest.is_empty() => Ok(CircleGen::Doubling),
            "rot" => Ok(CircleGen::rotation(num(rest)?)),
            "mob" => {
                let v = rest.split(',').map(num).collect::<Result<Vec<_>>>()?;
                let [a, b, c, d] = v[..] else {
                    return Err(bad());
                };
                Ok(CircleGen::Mobius(Mobius::new(a, b, c, d)?))
            }
            "aff" => {
                let (mut k, mut b) = (None, None);
                for part in rest.split(',') {
                    match part.trim().split_once('=') {
                        Some(("k", v)) => k = Some(v.trim().parse::<i32>().map_err(|_| bad())?),
                        Some(("b", v)) => b = Some(num(v)?),
                        _ => return Err(bad()),
                    }
                }
                Ok(CircleGen::affine(k.ok_or_else(bad)?, b.unwrap_or(0.0)))
            }
            _ => Err(bad()),
        }
    }
}

/// Parses a `;`-separated generator list.
pub fn parse_generators(s: &str) -> Result<Vec<CircleGen>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitStats {
    pub n_steps: usize,
    pub max_gap: f64,
    pub epsilon: f64,
    pub epsilon_dense: bool,
}

/// The orbit segment `x_0 = start, x_{t+1} = g_t(x_t)` with `g_t` drawn
/// uniformly from `gens` by a PCG32 stream seeded with `seed`.
pub fn orbit_points(gens: &[CircleGen], start: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if gens.is_empty() {
        return Err(Error::Empty("generator list"));
    }
    let mut rng = Pcg32::seed_from_u64(seed);
    let mut x = circle(start);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        let g = &gens[rng.gen_range(0..gens.len())];
        x = g.apply(x)?;
    }
    Ok(out)
}

/// Largest gap between cyclically consecutive points of `R/Z`.
pub fn max_circular_gap(points: &[f64]) -> f64 {
    if points.is_empty() {
        return 1.0;
    }
    let mut p: Vec<f64> = points.iter().map(|&x| circle(x)).collect();
    p.sort_by(f64::total_cmp);
    let wrap = p[0] + 1.0 - p[p.len() - 1];
    p.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

pub fn orbit_density(
    gens: &[CircleGen],
    start: f64,
    n: usize,
    epsilon: f64,
    seed: u64,
) -> Result<OrbitStats> {
    if n == 0 {
        return Err(Error::Parameter("orbit needs at least one step".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let max_gap = max_circular_gap(&orbit_points(gens, start, n, seed)?);
    Ok(OrbitStats {
        n_steps: n,
        max_gap,
        epsilon,
        epsilon_dense: max_gap < epsilon,
    })
}

/// Runs independent `(seed, start)` cells on up to `threads` threads; output
/// order follows `cells`.
pub fn orbit_cells(
    gens: &[CircleGen],
    cells: &[(u64, f64)],
    n: usize,
    epsilon: f64,
    threads: usize,
) -> Result<Vec<OrbitStats>> {
    let threads = threads.clamp(1, cells.len().max(1));
    let chunk = cells.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&(seed, start)| orbit_density(gens, start, n, epsilon, seed))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(cells.len());
        for h in handles {
            out.extend(h.join().expect("orbit worker panicked")?);
        }
        Ok(out)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationNumber {
    /// Birkhoff average `(F^n(x) - x) / n` of a lift, reduced to `[0, 1)`.
    pub value: f64,
    pub error_bound: f64,
    pub iterations: usize,
}

/// Rotation number of the composite map applying `word[0]` first.
pub fn rotation_number(word: &[CircleGen], n: usize) -> Result<RotationNumber> {
    if n < 100 {
        return Err(Error::Parameter(format!(
            "need at least 100 iterations, got {n}"
        )));
    }
    let x0 = 0.0;
    let mut x = x0;
    for _ in 0..n {
        for g in word {
            x = g.lift(x)?;
        }
    }
    let raw = (x - x0) / n as f64;
    Ok(RotationNumber {
        value: circle(raw),
        error_bound: 1.0 / n as f64,
        iterations: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// A reduced word in affine generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudogroupWord {
    pub letters: Vec<Letter>,
    pub map: AffineMap,
    pub text: String,
}

fn word_text(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "id".into();
    }
    letters
        .iter()
        .map(|l| {
            if l.inverse {
                format!("g{}^-1", l.generator + 1)
            } else {
                format!("g{}", l.generator + 1)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub word: PseudogroupWord,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum StabilizerStructure {
    Trivial,
    /// Every witness is a power of `generator`; `fixed_point` solves
    /// `2^k x + b = x` in closed form.
    CyclicEvidence {
        generator: PseudogroupWord,
        fixed_point: f64,
    },
    /// A witness whose linear exponent is not a multiple of the shortest one.
    Counterexample {
        generator: PseudogroupWord,
        offending: PseudogroupWord,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizerReport {
    pub witnesses: Vec<Witness>,
    pub structure: StabilizerStructure,
    pub words_examined: usize,
    pub tolerance: f64,
}

/// Enumerates reduced words up to `max_len` in `gens` and their inverses and
/// keeps the non-identity maps fixing `x`.
pub fn stabilizer_search(gens: &[AffineMap], x: f64, max_len: usize) -> Result<StabilizerReport> {
    if max_len == 0 {
        return Err(Error::Parameter("max_len must be at least 1".into()));
    }
    let letters: Vec<(Letter, AffineMap)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| {
            [
                (
                    Letter {
                        generator: i,
                        inverse: false,
                    },
                    *g,
                ),
                (
                    Letter {
                        generator: i,
                        inverse: true,
                    },
                    g.inverse(),
                ),
            ]
        })
        .collect();
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut examined = 0;
    let mut frontier: Vec<(Vec<Letter>, AffineMap)> = vec![(Vec::new(), AffineMap::IDENTITY)];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for (word, map) in &frontier {
            for &(l, g) in &letters {
                if let Some(last) = word.last() {
                    if last.generator == l.generator && last.inverse != l.inverse {
                        continue;
                    }
                }
                let mut w = word.clone();
                w.push(l);
                // Later letters act after earlier ones.
                let m = g.compose(map);
                examined += 1;
                let residual = (m.apply(x) - x).abs();
                if residual < FIXED_TOLERANCE && !m.is_identity() {
                    witnesses.push(Witness {
                        word: PseudogroupWord {
                            text: word_text(&w),
                            letters: w.clone(),
                            map: m,
                        },
                        residual,
                    });
                }
                next.push((w, m));
            }
        }
        frontier = next;
    }

    // On a common fixed point the linear part determines the map.
    for (i, a) in witnesses.iter().enumerate() {
        for b in &witnesses[..i] {
            let (ma, mb) = (a.word.map, b.word.map);
            if ma.k == mb.k && (ma.b - mb.b).abs() > 1e-6 * (1.0 + ma.b.abs().max(mb.b.abs())) {
                return Err(Error::Generator(format!(
                    "witnesses {} and {} share 2^{} but differ in translation",
                    a.word.text, b.word.text, ma.k
                )));
            }
        }
    }

    let structure = match witnesses.iter().min_by_key(|w| {
        (
            w.word.map.k.abs(),
            w.word.map.k < 0,
            w.word.letters.len(),
            w.word.letters.clone(),
        )
    }) {
        None => StabilizerStructure::Trivial,
        Some(p) => {
            let k0 = p.word.map.k;
            match witnesses.iter().find(|w| k0 == 0 || w.word.map.k % k0 != 0) {
                Some(bad) => StabilizerStructure::Counterexample {
                    generator: p.word.clone(),
                    offending: bad.word.clone(),
                },
                None => StabilizerStructure::CyclicEvidence {
                    generator: p.word.clone(),
                    fixed_point: p.word.map.fixed_point().unwrap_or(x),
                },
            }
        }
    };
    Ok(StabilizerReport {
        witnesses,
        structure,
        words_examined: examined,
        tolerance: FIXED_TOLERANCE,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorCheck {
    pub max_deviation: f64,
    pub ok: bool,
    pub grid: usize,
    pub tolerance: f64,
}

/// Compares `[F_1,H_1]⋯[F_g,H_g]` with the rotation `x -> x + target` on a
/// 1024-point grid.
pub fn verify_commutator_product(pairs: &[(Mobius, Mobius)], target: f64) -> CommutatorCheck {
    const GRID: usize = 1024;
    let product = pairs.iter().fold(Mobius::IDENTITY, |acc, (f, h)| {
        acc.compose(&f.commutator(h))
    });
    let max_deviation = (0..GRID)
        .map(|i| {
            let x = i as f64 / GRID as f64;
            circular_distance(product.apply(x), x + target)
        })
        .fold(0.0, f64::max);
    CommutatorCheck {
        max_deviation,
        ok: max_deviation < DEVIATION_TOLERANCE,
        grid: GRID,
        tolerance: DEVIATION_TOLERANCE,
    }
}
