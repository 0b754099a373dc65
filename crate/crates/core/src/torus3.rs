//! Mapping tori and circle bundles: geometry labels from monodromy data,
//! Euler-class bookkeeping and the rank of a period group.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::torelli_order;
use crate::linalg::{rank_rational, IntMatrix};
use crate::quadratic::QuadIrrational;
use crate::sl2z::{classify, IntMatrix2, TraceClass};

/// Nielsen–Thurston type of a monodromy. For genus 1 this is read off the
/// trace; for higher genus it is supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum MonodromyClass {
    Periodic,
    Reducible,
    Anosov { lambda: QuadIrrational },
    PseudoAnosov { lambda: QuadIrrational },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromySummary {
    pub genus: u32,
    pub class: MonodromyClass,
    pub torelli_k: Option<usize>,
}

impl MonodromySummary {
    pub fn new(genus: u32, class: MonodromyClass, torelli_k: Option<usize>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Genus { min: 1, got: 0 });
        }
        match &class {
            MonodromyClass::Anosov { lambda } | MonodromyClass::PseudoAnosov { lambda }
                if (*lambda - QuadIrrational::from_integer(1, lambda.radicand())).signum() <= 0 =>
            {
                return Err(Error::Parameter(format!(
                    "stretch factor {lambda} must exceed 1"
                )));
            }
            _ => {}
        }
        match (&class, genus) {
            (MonodromyClass::Anosov { .. }, g) if g != 1 => {
                return Err(Error::Parameter(
                    "Anosov monodromy lives on the torus".into(),
                ))
            }
            (MonodromyClass::PseudoAnosov { .. }, 1) => {
                return Err(Error::Parameter(
                    "genus-1 pseudo-Anosov maps are Anosov".into(),
                ))
            }
            _ => {}
        }
        if let Some(k) = torelli_k {
            if k > 2 * genus as usize {
                return Err(Error::Parameter(format!(
                    "torelli order {k} exceeds 2g = {}",
                    2 * genus
                )));
            }
        }
        Ok(MonodromySummary {
            genus,
            class,
            torelli_k,
        })
    }

    /// Torus monodromy: class from the trace, Torelli order from `A` itself.
    pub fn from_matrix(m: &IntMatrix2) -> Result<Self> {
        let class = match classify(m)? {
            TraceClass::Periodic { .. } => MonodromyClass::Periodic,
            TraceClass::Parabolic { .. } => MonodromyClass::Reducible,
            TraceClass::Anosov(data) => MonodromyClass::Anosov {
                lambda: data.lambda,
            },
        };
        let a = IntMatrix::from_rows(vec![vec![m.a, m.b], vec![m.c, m.d]])?;
        let j = IntMatrix::from_rows(vec![vec![0, 1], vec![-1, 0]])?;
        let k = torelli_order(&a, &j)?.k;
        MonodromySummary::new(1, class, Some(k))
    }

    /// First Betti number of the mapping torus.
    pub fn b1(&self) -> Option<usize> {
        self.torelli_k.map(|k| k + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Geometry {
    #[serde(rename = "E3")]
    Euclidean,
    #[serde(rename = "Sol")]
    Sol,
    #[serde(rename = "H2xR")]
    H2xR,
    #[serde(rename = "H3")]
    H3,
    #[serde(rename = "SL2R~")]
    UniversalSl2,
    /// Not geometric as a whole: the mapping torus splits along a torus.
    #[serde(rename = "incompressible torus")]
    IncompressibleTorus,
}

impl Geometry {
    pub fn label(self) -> &'static str {
        match self {
            Geometry::Euclidean => "E3",
            Geometry::Sol => "Sol",
            Geometry::H2xR => "H2xR",
            Geometry::H3 => "H3",
            Geometry::UniversalSl2 => "SL2R~",
            Geometry::IncompressibleTorus => "incompressible torus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometryReport {
    pub geometry: Geometry,
    pub note: Option<String>,
}

const POLYNOMIAL_GROWTH: &str = "fundamental group has polynomial growth: \
no foliation by hyperbolic leaves exists";

pub fn geometry_classify(m: &MonodromySummary) -> GeometryReport {
    let (geometry, note) = match (&m.class, m.genus) {
        (MonodromyClass::Periodic, 1) => (Geometry::Euclidean, Some(POLYNOMIAL_GROWTH.to_string())),
        (MonodromyClass::Periodic, _) => (Geometry::H2xR, None),
        (MonodromyClass::Reducible, 1) => (
            Geometry::IncompressibleTorus,
            Some("Nil geometry; fundamental group has polynomial growth".to_string()),
        ),
        (MonodromyClass::Reducible, _) => (Geometry::IncompressibleTorus, None),
        (MonodromyClass::Anosov { .. } | MonodromyClass::PseudoAnosov { .. }, 1) => {
            (Geometry::Sol, None)
        }
        (MonodromyClass::Anosov { .. } | MonodromyClass::PseudoAnosov { .. }, _) => {
            (Geometry::H3, None)
        }
    };
    GeometryReport { geometry, note }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleSource {
    /// Suspension of a representation of the base surface group.
    Suspension,
    /// Surgery regluing a solid torus with `p -> p + e m`.
    Surgery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BundleData {
    pub base_genus: u32,
    pub euler_class: i64,
    pub source: BundleSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub geometry: Geometry,
    pub euler_class: i64,
    /// The surgery description fixes `e` only up to sign; decisions use `|e|`.
    pub euler_abs: u64,
    pub milnor_wood_bound: u64,
    pub milnor_wood_ok: bool,
    pub transverse_to_fibration_possible: bool,
    /// `|e| = 2g - 2`: a realizing representation is discrete and faithful.
    pub borderline: bool,
}

pub fn euler_report(b: &BundleData) -> Result<EulerReport> {
    if b.base_genus < 2 {
        return Err(Error::Genus {
            min: 2,
            got: b.base_genus,
        });
    }
    let bound = 2 * u64::from(b.base_genus) - 2;
    let abs = b.euler_class.unsigned_abs();
    let ok = abs <= bound;
    Ok(EulerReport {
        geometry: if b.euler_class == 0 {
            Geometry::H2xR
        } else {
            Geometry::UniversalSl2
        },
        euler_class: b.euler_class,
        euler_abs: abs,
        milnor_wood_bound: bound,
        milnor_wood_ok: ok,
        transverse_to_fibration_possible: ok,
        borderline: abs == bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodRank {
    pub r: usize,
    /// Rank of the deck group of the leaf cover, `r - 1`; absent for an exact form.
    pub leaf_cover_rank: Option<usize>,
    pub remark: String,
}

/// Rank of the group generated by periods written in coordinates over a
/// basis of the reals that the caller declares rationally independent.
pub fn period_group_rank(periods: &[Vec<BigRational>]) -> Result<PeriodRank> {
    let Some(first) = periods.first() else {
        return Err(Error::Empty("period list"));
    };
    if periods.iter().any(|p| p.len() != first.len()) {
        return Err(Error::Dimension("period vectors differ in length".into()));
    }
    let r = rank_rational(periods);
    let remark = match r {
        0 => "all periods vanish: the form is exact and has no transverse foliation of this kind",
        1 => "periods are commensurable: leaves are compact fibres",
        _ => "rank at least 2: leaves are noncompact and the foliation is minimal",
    };
    Ok(PeriodRank {
        r,
        leaf_cover_rank: r.checked_sub(1),
        remark: remark.to_string(),
    })
}

/// Parses `"1/2,0"` style rational vectors.
pub fn parse_rational_vector(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (num, den) = t.split_once('/').unwrap_or((t, "1"));
            let parse = |x: &str| {
                x.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parameter(format!("not a rational number: {t:?}")))
            };
            let (n, d) = (parse(num)?, parse(den)?);
            if d.is_zero() {
                return Err(Error::Parameter(format!("zero denominator in {t:?}")));
            }
            Ok(BigRational::new(n, d))
        })
        .collect()
}
