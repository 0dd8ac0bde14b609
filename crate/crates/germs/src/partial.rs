//! Partial bijections on a finite set, the elements of the symmetric
//! inverse monoid I(X).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PartialBijectionError {
    #[error("point {0} appears twice in the domain")]
    DuplicateDomainPoint(usize),
    #[error("point {0} appears twice in the image")]
    NotInjective(usize),
    #[error("point {0} out of range for a space of size {1}")]
    PointOutOfRange(usize, usize),
}

/// A bijection between two subsets of `{0, .., n-1}`, stored as a total
/// vector of optional images. The empty map is the zero of I(X).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn empty(n: usize) -> Self {
        PartialBijection {
            map: vec![None; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        PartialBijection {
            map: (0..n).map(Some).collect(),
        }
    }

    /// Partial identity with the given domain.
    pub fn id_on(n: usize, domain: &[usize]) -> Self {
        let mut map = vec![None; n];
        for &x in domain {
            map[x] = Some(x);
        }
        PartialBijection { map }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PartialBijectionError> {
        let mut map = vec![None; n];
        let mut hit = vec![false; n];
        for &(x, y) in pairs {
            if x >= n {
                return Err(PartialBijectionError::PointOutOfRange(x, n));
            }
            if y >= n {
                return Err(PartialBijectionError::PointOutOfRange(y, n));
            }
            if map[x].is_some() {
                return Err(PartialBijectionError::DuplicateDomainPoint(x));
            }
            if hit[y] {
                return Err(PartialBijectionError::NotInjective(y));
            }
            map[x] = Some(y);
            hit[y] = true;
        }
        Ok(PartialBijection { map })
    }

    pub fn space_size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&x| self.map[x].is_some()).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.map.iter().flatten().copied().collect();
        img.sort_unstable();
        img
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(|y| y.is_none())
    }

    pub fn is_partial_identity(&self) -> bool {
        self.map
            .iter()
            .enumerate()
            .all(|(x, y)| y.is_none() || *y == Some(x))
    }

    pub fn inverse(&self) -> Self {
        let n = self.map.len();
        let mut map = vec![None; n];
        for (x, y) in self.map.iter().enumerate() {
            if let Some(y) = y {
                map[*y] = Some(x);
            }
        }
        PartialBijection { map }
    }
}

/// f∘g on the largest possible domain: defined at x iff g(x) and f(g(x))
/// are. Disjoint range/domain gives the empty map.
pub fn compose_partial(f: &PartialBijection, g: &PartialBijection) -> PartialBijection {
    assert_eq!(
        f.space_size(),
        g.space_size(),
        "composition requires the same ambient space"
    );
    let map = (0..g.space_size())
        .map(|x| g.apply(x).and_then(|y| f.apply(y)))
        .collect();
    PartialBijection { map }
}

impl fmt::Debug for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| format!("{x}>{y}")))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_on_largest_domain() {
        // g: 0->1, f: 1->2 on a 3-point space
        let g = PartialBijection::from_pairs(3, &[(0, 1)]).unwrap();
        let f = PartialBijection::from_pairs(3, &[(1, 2)]).unwrap();
        let fg = compose_partial(&f, &g);
        assert_eq!(fg.apply(0), Some(2));
        assert_eq!(fg.domain(), vec![0]);
    }

    #[test]
    fn disjoint_range_and_domain_compose_to_zero() {
        let g = PartialBijection::from_pairs(3, &[(0, 0)]).unwrap();
        let f = PartialBijection::from_pairs(3, &[(1, 2)]).unwrap();
        assert!(compose_partial(&f, &g).is_empty());
    }

    #[test]
    fn partial_identities_compose_by_intersection() {
        let u = PartialBijection::id_on(4, &[0, 1, 2]);
        let v = PartialBijection::id_on(4, &[1, 2, 3]);
        assert_eq!(compose_partial(&u, &v), PartialBijection::id_on(4, &[1, 2]));
    }

    #[test]
    fn inverse_swaps_domain_and_image() {
        let f = PartialBijection::from_pairs(3, &[(0, 2), (1, 0)]).unwrap();
        let g = f.inverse();
        assert_eq!(g.apply(2), Some(0));
        assert_eq!(g.apply(0), Some(1));
        assert_eq!(compose_partial(&g, &f), PartialBijection::id_on(3, &[0, 1]));
    }

    #[test]
    fn injectivity_is_enforced() {
        assert!(PartialBijection::from_pairs(3, &[(0, 1), (2, 1)]).is_err());
    }
}
