//! Permutations of `0..n` with 1-based cycle notation for I/O.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Permutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `0..n` from disjoint 0-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &i) in cycle.iter().enumerate() {
                if i >= n {
                    return Err(Error::Permutation(format!("point {} out of range", i + 1)));
                }
                if touched[i] {
                    return Err(Error::Permutation(format!("point {} appears twice", i + 1)));
                }
                touched[i] = true;
                images[i] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// Cyclic shift `i -> i + shift mod n`.
    pub fn rotation(n: usize, shift: i64) -> Self {
        let s = shift.rem_euclid(n as i64) as usize;
        Perm {
            images: (0..n).map(|i| (i + s) % n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Perm { images }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    /// `self` first, then `other`: `i -> other(self(i))`.
    pub fn then(&self, other: &Perm) -> Self {
        assert_eq!(self.len(), other.len(), "permutation sizes differ");
        Perm {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.len());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Disjoint cycles (0-based), each starting at its smallest point, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Conjugate by a relabeling `r`: the result sends `r(i)` to `r(self(i))`.
    pub fn relabel(&self, r: &Perm) -> Self {
        let mut images = vec![0; self.len()];
        for i in 0..self.len() {
            images[r.apply(i)] = r.apply(self.images[i]);
        }
        Perm { images }
    }

    /// Non-trivial cycles in 1-based notation; the identity prints as `()`.
    pub fn to_cycle_string(&self) -> String {
        let s: String = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect();
        if s.is_empty() {
            "()".to_string()
        } else {
            s
        }
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"`.
    ///
    /// `n` fixes the degree; when `None` the largest point mentioned is used.
    pub fn parse_cycles(s: &str, n: Option<usize>) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        let max = cycles.iter().flatten().copied().max().unwrap_or(0);
        let n = n.unwrap_or(max);
        if max > n {
            return Err(Error::CycleNotation(format!(
                "point {max} exceeds degree {n}"
            )));
        }
        let zero_based: Vec<Vec<usize>> = cycles
            .into_iter()
            .map(|c| c.into_iter().map(|i| i - 1).collect())
            .collect();
        Perm::from_cycles(n, &zero_based).map_err(|e| Error::CycleNotation(e.to_string()))
    }
}

fn parse_cycle_list(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::CycleNotation(format!("expected '(' in {s:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::CycleNotation(format!("unbalanced parentheses in {s:?}")))?;
        let inner = &body[..close];
        let mut cycle = Vec::new();
        for tok in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok
                .parse()
                .map_err(|_| Error::CycleNotation(format!("bad point {tok:?}")))?;
            if v == 0 {
                return Err(Error::CycleNotation("points are 1-based".into()));
            }
            cycle.push(v);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// Serialized as 1-based cycles including fixed points, e.g. `[[1,2,3,4],[5]]`.
impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let cycles: Vec<Vec<usize>> = self
            .cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|i| i + 1).collect())
            .collect();
        cycles.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let cycles: Vec<Vec<usize>> = Vec::deserialize(deserializer)?;
        let n = cycles.iter().flatten().copied().max().unwrap_or(0);
        if cycles.iter().flatten().any(|&i| i == 0) {
            return Err(serde::de::Error::custom("cycle points are 1-based"));
        }
        let zero_based: Vec<Vec<usize>> = cycles
            .into_iter()
            .map(|c| c.into_iter().map(|i| i - 1).collect())
            .collect();
        Perm::from_cycles(n, &zero_based).map_err(serde::de::Error::custom)
    }
}

/// Orbits of the group generated by `gens` acting on `0..n`, sorted.
pub fn orbits(n: usize, gens: &[&Perm]) -> Vec<Vec<usize>> {
    let mut moves: Vec<Perm> = gens.iter().map(|g| (*g).clone()).collect();
    moves.extend(gens.iter().map(|g| g.inverse()));
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < orbit.len() {
            let i = orbit[head];
            head += 1;
            for g in &moves {
                let j = g.apply(i);
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Perm::parse_cycles("(1 2 3 4)(5 6 7 8)", None).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.apply(3), 0);
        assert_eq!(p.to_cycle_string(), "(1 2 3 4)(5 6 7 8)");
        assert_eq!(
            Perm::parse_cycles("()", Some(3)).unwrap(),
            Perm::identity(3)
        );
    }

    #[test]
    fn malformed_cycles_rejected() {
        assert!(Perm::parse_cycles("(1 2", None).is_err());
        assert!(Perm::parse_cycles("(1 2)(2 3)", None).is_err());
        assert!(Perm::parse_cycles("(0 1)", None).is_err());
        assert!(Perm::parse_cycles("1 2", None).is_err());
        assert!(Perm::parse_cycles("(1 x)", None).is_err());
        assert!(Perm::parse_cycles("(1 5)", Some(4)).is_err());
    }

    #[test]
    fn composition_order() {
        let a = Perm::parse_cycles("(1 2)", Some(3)).unwrap();
        let b = Perm::parse_cycles("(2 3)", Some(3)).unwrap();
        // 1 -> 2 -> 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(a.then(&b).pow(3), Perm::identity(3));
    }

    #[test]
    fn json_uses_one_based_cycles() {
        let p = Perm::parse_cycles("(1 3)", Some(3)).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1,3],[2]]");
        let back: Perm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn orbits_of_generated_group() {
        let a = Perm::parse_cycles("(1 2)", Some(4)).unwrap();
        let b = Perm::parse_cycles("(3 4)", Some(4)).unwrap();
        assert_eq!(orbits(4, &[&a, &b]), vec![vec![0, 1], vec![2, 3]]);
    }
}
