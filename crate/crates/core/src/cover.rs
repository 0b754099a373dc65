//! Branched covers of the torus and the sphere described by ramification
//! data and permutation monodromy.
//!
//! Generator conventions for a base with punctures `p1..pn`: the loops
//! `alpha_i` run counterclockwise around `p_i`, and for the torus the
//! relation is `alpha_1 ... alpha_n [m, p] = 1` with `[m, p] = m p m^-1 p^-1`
//! (for the sphere, `alpha_1 ... alpha_n = 1`). Monodromy acts on the right:
//! the image of a product `xy` is "first x, then y". The image of `alpha_1`
//! is never stored; it is derived from the relation.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{orbits, Perm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub label: String,
    /// Ramification indices of the points in the fibre, sorted descending.
    pub fibre: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationProfile {
    pub degree: u32,
    pub branch_points: Vec<BranchPoint>,
}

impl RamificationProfile {
    /// Validates that every fibre partitions the degree.
    pub fn new(degree: u32, branch_points: Vec<BranchPoint>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Profile("degree must be positive".into()));
        }
        let mut branch_points = branch_points;
        for bp in &mut branch_points {
            if bp.fibre.contains(&0) {
                return Err(Error::Profile(format!(
                    "zero ramification index over {}",
                    bp.label
                )));
            }
            let sum: u64 = bp.fibre.iter().map(|&e| u64::from(e)).sum();
            if sum != u64::from(degree) {
                return Err(Error::Profile(format!(
                    "fibre over {} sums to {sum}, degree is {degree}",
                    bp.label
                )));
            }
            bp.fibre.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(RamificationProfile {
            degree,
            branch_points,
        })
    }

    /// Shorthand with labels `p1, p2, ...`.
    pub fn from_fibres(degree: u32, fibres: Vec<Vec<u32>>) -> Result<Self> {
        let bps = fibres
            .into_iter()
            .enumerate()
            .map(|(i, fibre)| BranchPoint {
                label: format!("p{}", i + 1),
                fibre,
            })
            .collect();
        Self::new(degree, bps)
    }

    /// `sum (e - 1)` over all ramification points.
    pub fn total_ramification(&self) -> i64 {
        self.branch_points
            .iter()
            .flat_map(|bp| &bp.fibre)
            .map(|&e| i64::from(e) - 1)
            .sum()
    }
}

/// Riemann–Hurwitz: `chi(cover) = d * chi(base) - sum (e_i - 1)`.
pub fn riemann_hurwitz_chi(base_chi: i64, profile: &RamificationProfile) -> Result<i64> {
    // Revalidate: profiles may be deserialized without going through `new`.
    RamificationProfile::new(profile.degree, profile.branch_points.clone())?;
    Ok(i64::from(profile.degree) * base_chi - profile.total_ramification())
}

/// Genus of a closed connected orientable surface with Euler characteristic `chi`.
pub fn genus_from_chi(chi: i64) -> Result<u32> {
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(Error::Profile(format!(
            "Euler characteristic {chi} is not that of a closed orientable surface"
        )));
    }
    Ok(((2 - chi) / 2) as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Torus,
    Sphere,
}

impl Base {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Base::Torus => 0,
            Base::Sphere => 2,
        }
    }
}

/// A branched cover given by permutation monodromy on the free generators of
/// the punctured base.
///
/// Keys of `monodromy`: `"m"`, `"p"` (torus only) and `"alpha_2"`..`"alpha_n"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub base: Base,
    pub degree: u32,
    pub punctures: Vec<String>,
    pub monodromy: BTreeMap<String, Perm>,
}

fn alpha_key(i: usize) -> String {
    format!("alpha_{}", i + 1)
}

impl CoverSpec {
    /// Builds and validates a cover spec.
    pub fn new(
        base: Base,
        degree: u32,
        punctures: Vec<String>,
        monodromy: BTreeMap<String, Perm>,
    ) -> Result<Self> {
        let spec = CoverSpec {
            base,
            degree,
            punctures,
            monodromy,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn expected_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = (1..self.punctures.len()).map(alpha_key).collect();
        if self.base == Base::Torus {
            keys.push("m".into());
            keys.push("p".into());
        }
        keys.sort();
        keys
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::Cover("degree must be positive".into()));
        }
        if self.punctures.is_empty() {
            return Err(Error::Cover("at least one puncture is required".into()));
        }
        let keys: Vec<String> = self.monodromy.keys().cloned().collect();
        let expected = self.expected_keys();
        if keys != expected {
            return Err(Error::Cover(format!(
                "monodromy generators {keys:?}, expected {expected:?}"
            )));
        }
        if let Some((k, p)) = self
            .monodromy
            .iter()
            .find(|(_, p)| p.len() != self.degree as usize)
        {
            return Err(Error::Cover(format!(
                "image of {k} acts on {} points, degree is {}",
                p.len(),
                self.degree
            )));
        }
        if !self.is_transitive() {
            return Err(Error::Cover("monodromy group is not transitive".into()));
        }
        Ok(())
    }

    pub fn is_transitive(&self) -> bool {
        let gens: Vec<&Perm> = self.monodromy.values().collect();
        orbits(self.degree as usize, &gens).len() == 1
    }

    fn image(&self, key: &str) -> &Perm {
        &self.monodromy[key]
    }

    /// Image of the commutator `[m, p] = m p m^-1 p^-1`; identity on the sphere.
    pub fn commutator_image(&self) -> Perm {
        match self.base {
            Base::Sphere => Perm::identity(self.degree as usize),
            Base::Torus => {
                let m = self.image("m");
                let p = self.image("p");
                m.then(p).then(&m.inverse()).then(&p.inverse())
            }
        }
    }

    /// Image of `alpha_1` forced by the surface-group relation.
    pub fn alpha1(&self) -> Perm {
        let mut rest = Perm::identity(self.degree as usize);
        for i in 1..self.punctures.len() {
            rest = rest.then(self.image(&alpha_key(i)));
        }
        rest.then(&self.commutator_image()).inverse()
    }

    /// Image of the loop around puncture `i` (0-based).
    pub fn puncture_image(&self, i: usize) -> Perm {
        if i == 0 {
            self.alpha1()
        } else {
            self.image(&alpha_key(i)).clone()
        }
    }

    /// The relation `alpha_1 ... alpha_n [m, p] = 1` holds for the stored images.
    pub fn relation_holds(&self) -> bool {
        let mut prod = Perm::identity(self.degree as usize);
        for i in 0..self.punctures.len() {
            prod = prod.then(&self.puncture_image(i));
        }
        prod.then(&self.commutator_image()).is_identity()
    }

    /// Ramification profile over the punctures (cycle types of the loop images).
    pub fn profile(&self) -> RamificationProfile {
        let bps = self
            .punctures
            .iter()
            .enumerate()
            .map(|(i, label)| BranchPoint {
                label: label.clone(),
                fibre: self
                    .puncture_image(i)
                    .cycle_type()
                    .into_iter()
                    .map(|c| c as u32)
                    .collect(),
            })
            .collect();
        RamificationProfile::new(self.degree, bps).expect("cycle types partition the degree")
    }

    /// Genus of the closed-up total space.
    pub fn genus(&self) -> Result<u32> {
        let chi = riemann_hurwitz_chi(self.base.euler_characteristic(), &self.profile())?;
        genus_from_chi(chi)
    }
}

/// The 2-fold cover of the torus branched over `n` points: every `alpha_i`
/// (`i >= 2`) swaps the sheets, `m` and `p` act trivially.
pub fn build_double_cover(n: usize) -> Result<CoverSpec> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Parity(n));
    }
    let swap = Perm::transposition(2, 0, 1);
    let mut monodromy = BTreeMap::new();
    monodromy.insert("m".to_string(), Perm::identity(2));
    monodromy.insert("p".to_string(), Perm::identity(2));
    for i in 1..n {
        monodromy.insert(alpha_key(i), swap.clone());
    }
    let punctures = (1..=n).map(|i| format!("p{i}")).collect();
    let spec = CoverSpec::new(Base::Torus, 2, punctures, monodromy)?;
    debug_assert_eq!(spec.alpha1(), swap);
    Ok(spec)
}

/// Which of the admissibility conditions on `(d; a1..a4)` fail.
pub fn pillowcase_violations(d: u32, a: [u32; 4]) -> Vec<String> {
    let mut out = Vec::new();
    if d == 0 {
        out.push("d must be positive".to_string());
        return out;
    }
    if let Some(bad) = a.iter().find(|&&ai| ai == 0 || ai > d) {
        out.push(format!("0 < a_i <= d fails (a_i = {bad}, d = {d})"));
    }
    let g = a.iter().fold(d, |g, &ai| g.gcd(&ai));
    if g != 1 {
        out.push(format!("gcd(d, a1, a2, a3, a4) = {g}, expected 1"));
    }
    let sum: u32 = a.iter().sum();
    if !sum.is_multiple_of(d) {
        out.push(format!(
            "a1 + a2 + a3 + a4 = {sum} is not divisible by d = {d}"
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pillowcase {
    pub d: u32,
    pub a: [u32; 4],
    pub genus: u32,
    /// The d-fold cyclic cover of the sphere branched over `z1..z4`.
    pub sphere_profile: RamificationProfile,
    /// The 2d-fold cover of the torus with one branch point, present when
    /// `d` is even and `gcd(d, a_i) = 1` for all `i`.
    pub torus_profile: Option<RamificationProfile>,
    /// `d` even and every `a_i` odd.
    pub translation_surface: bool,
}

/// Genus and ramification data of `w^d = prod (z - z_i)^{a_i}`.
pub fn pillowcase_genus(d: u32, a: [u32; 4]) -> Result<Pillowcase> {
    let violations = pillowcase_violations(d, a);
    if !violations.is_empty() {
        return Err(Error::Pillowcase(violations));
    }
    let gcds: Vec<u32> = a.iter().map(|&ai| d.gcd(&ai)).collect();
    let gsum: u32 = gcds.iter().sum();
    // 2g = 2d + 2 - sum gcd; integrality is guaranteed by Riemann–Hurwitz.
    debug_assert_eq!(gsum % 2, 0);
    let genus = d + 1 - gsum / 2;
    let sphere_profile = RamificationProfile::new(
        d,
        gcds.iter()
            .enumerate()
            .map(|(i, &g)| BranchPoint {
                label: format!("z{}", i + 1),
                fibre: vec![d / g; g as usize],
            })
            .collect(),
    )?;
    let translation_surface = d.is_multiple_of(2) && a.iter().all(|ai| ai % 2 == 1);
    let torus_profile = if translation_surface && gcds.iter().all(|&g| g == 1) {
        Some(RamificationProfile::new(
            2 * d,
            vec![BranchPoint {
                label: "p".into(),
                fibre: vec![d / 2; 4],
            }],
        )?)
    } else {
        None
    };
    Ok(Pillowcase {
        d,
        a,
        genus,
        sphere_profile,
        torus_profile,
        translation_surface,
    })
}

/// The cyclic d-fold cover of the sphere with `alpha_i` acting as `+a_i` on `Z/d`.
pub fn pillowcase_sphere_cover(d: u32, a: [u32; 4]) -> Result<CoverSpec> {
    let violations = pillowcase_violations(d, a);
    if !violations.is_empty() {
        return Err(Error::Pillowcase(violations));
    }
    let mut monodromy = BTreeMap::new();
    for (i, &ai) in a.iter().enumerate().skip(1) {
        monodromy.insert(alpha_key(i), Perm::rotation(d as usize, i64::from(ai)));
    }
    let punctures = (1..=4).map(|i| format!("z{i}")).collect();
    CoverSpec::new(Base::Sphere, d, punctures, monodromy)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafGrowth {
    pub degree: u32,
    pub k: usize,
    /// `chi(D'_j)` for `j = 1..=k`.
    pub chis: Vec<i64>,
    /// `d - k`
    pub chi_bound: i64,
    /// `chi(D'_j) <= d - j` for all `j` and the sequence strictly decreases.
    pub certified: bool,
}

/// Euler characteristics of the lifts `D'_j` of disks `D_j` (chi = 1)
/// containing the first `j` branch points, each branch point contributing
/// `d_i` ramification points of index `e_i`.
///
/// A single `(d_i, e_i)` pair is reused for every branch point.
pub fn leaf_genus_growth(d: u32, per_point: &[(u32, u32)], k: usize) -> Result<LeafGrowth> {
    if d < 2 {
        return Err(Error::Branching(format!(
            "degree-{d} covers admit no ramification index e >= 2"
        )));
    }
    if k == 0 {
        return Err(Error::Branching("k must be positive".into()));
    }
    if per_point.is_empty() || (per_point.len() > 1 && per_point.len() < k) {
        return Err(Error::Branching(format!(
            "need one (d_i, e_i) pair or at least k = {k}, got {}",
            per_point.len()
        )));
    }
    for &(di, ei) in per_point {
        if ei < 2 {
            return Err(Error::Branching(format!(
                "e_i = {ei} < 2 is not a branch point"
            )));
        }
        if di == 0 || u64::from(di) * u64::from(ei) > u64::from(d) {
            return Err(Error::Branching(format!(
                "d_i * e_i = {di} * {ei} must lie in [2, d = {d}]"
            )));
        }
    }
    let pair = |j: usize| per_point[if per_point.len() == 1 { 0 } else { j }];
    let mut chi = i64::from(d);
    let mut chis = Vec::with_capacity(k);
    for j in 0..k {
        let (di, ei) = pair(j);
        chi -= i64::from(di) * (i64::from(ei) - 1);
        chis.push(chi);
    }
    let d64 = i64::from(d);
    let certified = chis
        .iter()
        .enumerate()
        .all(|(j, &c)| c <= d64 - (j as i64 + 1))
        && chis.windows(2).all(|w| w[1] < w[0]);
    Ok(LeafGrowth {
        degree: d,
        k,
        chis,
        chi_bound: d64 - k as i64,
        certified,
    })
}
