//! Finite groupoids as explicit arrow tables: axiom checking, fibers,
//! homomorphisms, d-/r-bijectivity, and JSON/DOT export.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cap on |composable pairs| for `check_axioms`.
pub const MAX_COMPOSABLE_PAIRS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum GroupoidError {
    #[error("arrow {0} is not a unit")]
    NotAUnit(usize),
    #[error("map is not a groupoid homomorphism")]
    NotAHomomorphism,
    #[error("homomorphism is not d-bijective")]
    NotDBijective,
    #[error("size guard exceeded: {0} composable pairs, limit {1}")]
    SizeGuard(usize, usize),
    #[error("groupoid JSON: {0}")]
    Format(String),
}

/// A finite groupoid: arrows are dense ids, the product is a partial
/// table on composable pairs, plus a total inverse map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub n_arrows: usize,
    pub inv: Vec<usize>,
    pub product: BTreeMap<(usize, usize), usize>,
    /// Optional display labels, used by exports.
    pub labels: Vec<String>,
}

/// One violated axiom with a concrete witness.
#[derive(Clone, Debug, Serialize)]
pub enum AxiomViolation {
    InverseOutOfRange { arrow: usize },
    NotInvolutive { arrow: usize },
    ProductOutOfRange { pair: (usize, usize) },
    MissingSelfComposable { arrow: usize },
    AssociativityDomain { triple: (usize, usize, usize) },
    Associativity { triple: (usize, usize, usize) },
    LeftCancellation { pair: (usize, usize) },
    RightCancellation { pair: (usize, usize) },
    ComposabilityMismatch { pair: (usize, usize) },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::InverseOutOfRange { arrow } => {
                write!(f, "inverse of {arrow} is out of range")
            }
            AxiomViolation::NotInvolutive { arrow } => {
                write!(f, "inverse is not involutive at {arrow}")
            }
            AxiomViolation::ProductOutOfRange { pair } => {
                write!(f, "product at {pair:?} is out of range")
            }
            AxiomViolation::MissingSelfComposable { arrow } => {
                write!(f, "({arrow}, {arrow}⁻¹) or ({arrow}⁻¹, {arrow}) not composable")
            }
            AxiomViolation::AssociativityDomain { triple } => {
                write!(f, "composability fails to propagate at {triple:?}")
            }
            AxiomViolation::Associativity { triple } => {
                write!(f, "associativity fails at {triple:?}")
            }
            AxiomViolation::LeftCancellation { pair } => {
                write!(f, "γ⁻¹γη ≠ η at {pair:?}")
            }
            AxiomViolation::RightCancellation { pair } => {
                write!(f, "ξγγ⁻¹ ≠ ξ at {pair:?}")
            }
            AxiomViolation::ComposabilityMismatch { pair } => {
                write!(f, "composability of {pair:?} disagrees with r(η) = d(γ)")
            }
        }
    }
}

impl FiniteGroupoid {
    pub fn new(
        n_arrows: usize,
        inv: Vec<usize>,
        product: BTreeMap<(usize, usize), usize>,
    ) -> Self {
        let labels = (0..n_arrows).map(|i| i.to_string()).collect();
        FiniteGroupoid {
            n_arrows,
            inv,
            product,
            labels,
        }
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.product.get(&(g, h)).copied()
    }

    /// d(γ) = γ⁻¹γ. `None` only on structurally broken tables.
    pub fn source(&self, g: usize) -> Option<usize> {
        self.compose(self.inv[g], g)
    }

    /// r(γ) = γγ⁻¹.
    pub fn range(&self, g: usize) -> Option<usize> {
        self.compose(g, self.inv[g])
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.compose(g, g) == Some(g) && self.inv[g] == g
    }

    /// Units in arrow order.
    pub fn units(&self) -> Vec<usize> {
        (0..self.n_arrows).filter(|&g| self.is_unit(g)).collect()
    }

    /// G_x = d⁻¹(x).
    pub fn d_fiber(&self, x: usize) -> Result<Vec<usize>, GroupoidError> {
        if !self.is_unit(x) {
            return Err(GroupoidError::NotAUnit(x));
        }
        Ok((0..self.n_arrows)
            .filter(|&g| self.source(g) == Some(x))
            .collect())
    }

    /// G^x = r⁻¹(x).
    pub fn r_fiber(&self, x: usize) -> Result<Vec<usize>, GroupoidError> {
        if !self.is_unit(x) {
            return Err(GroupoidError::NotAUnit(x));
        }
        Ok((0..self.n_arrows)
            .filter(|&g| self.range(g) == Some(x))
            .collect())
    }

    /// Checks the groupoid axioms exhaustively and returns every
    /// violation found, with witnesses. Empty report = valid groupoid.
    pub fn check_axioms(&self) -> Result<Vec<AxiomViolation>, GroupoidError> {
        if self.product.len() > MAX_COMPOSABLE_PAIRS {
            return Err(GroupoidError::SizeGuard(
                self.product.len(),
                MAX_COMPOSABLE_PAIRS,
            ));
        }
        let n = self.n_arrows;
        let mut out = Vec::new();
        for g in 0..n {
            if self.inv[g] >= n {
                out.push(AxiomViolation::InverseOutOfRange { arrow: g });
                return Ok(out); // cannot proceed safely
            }
        }
        for g in 0..n {
            if self.inv[self.inv[g]] != g {
                out.push(AxiomViolation::NotInvolutive { arrow: g });
            }
        }
        for (&(g, h), &p) in &self.product {
            if g >= n || h >= n || p >= n {
                out.push(AxiomViolation::ProductOutOfRange { pair: (g, h) });
                return Ok(out);
            }
        }
        // (γ, γ⁻¹) and (γ⁻¹, γ) composable.
        for g in 0..n {
            if self.compose(g, self.inv[g]).is_none() || self.compose(self.inv[g], g).is_none() {
                out.push(AxiomViolation::MissingSelfComposable { arrow: g });
            }
        }
        // Cancellation: γ⁻¹(γη) = η and (ξγ)γ⁻¹ = ξ.
        for (&(g, h), &gh) in &self.product {
            match self.compose(self.inv[g], gh) {
                Some(v) if v == h => {}
                _ => out.push(AxiomViolation::LeftCancellation { pair: (g, h) }),
            }
            match self.compose(gh, self.inv[h]) {
                Some(v) if v == g => {}
                _ => out.push(AxiomViolation::RightCancellation { pair: (g, h) }),
            }
        }
        // Composability propagation and associativity.
        let pairs: Vec<((usize, usize), usize)> =
            self.product.iter().map(|(&k, &v)| (k, v)).collect();
        for &((g, h), gh) in &pairs {
            for nu in 0..n {
                if let Some(hn) = self.compose(h, nu) {
                    let left = self.compose(gh, nu);
                    let right = self.compose(g, hn);
                    if left.is_none() || right.is_none() {
                        out.push(AxiomViolation::AssociativityDomain {
                            triple: (g, h, nu),
                        });
                    } else if left != right {
                        out.push(AxiomViolation::Associativity {
                            triple: (g, h, nu),
                        });
                    }
                }
            }
        }
        // Composability coincides with r(η) = d(γ).
        for g in 0..n {
            for h in 0..n {
                let should = match (self.source(g), self.range(h)) {
                    (Some(d), Some(r)) => d == r,
                    _ => false,
                };
                if should != self.product.contains_key(&(g, h)) {
                    out.push(AxiomViolation::ComposabilityMismatch { pair: (g, h) });
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> GroupoidJson {
        let src: Vec<usize> = (0..self.n_arrows)
            .map(|g| self.source(g).expect("valid groupoid"))
            .collect();
        let rng: Vec<usize> = (0..self.n_arrows)
            .map(|g| self.range(g).expect("valid groupoid"))
            .collect();
        GroupoidJson {
            units: self
                .units()
                .into_iter()
                .map(|u| UnitJson {
                    id: u,
                    label: self.labels[u].clone(),
                })
                .collect(),
            arrows: (0..self.n_arrows)
                .map(|g| ArrowJson {
                    id: g,
                    label: self.labels[g].clone(),
                    src: src[g],
                    rng: rng[g],
                    inv: self.inv[g],
                })
                .collect(),
            product: self
                .product
                .iter()
                .map(|(&(g, h), &p)| [g, h, p])
                .collect(),
        }
    }

    pub fn from_json(j: &GroupoidJson) -> Result<Self, GroupoidError> {
        let n = j.arrows.len();
        let mut inv = vec![usize::MAX; n];
        let mut labels = vec![String::new(); n];
        for a in &j.arrows {
            if a.id >= n {
                return Err(GroupoidError::Format(format!(
                    "arrow id {} out of range",
                    a.id
                )));
            }
            inv[a.id] = a.inv;
            labels[a.id] = a.label.clone();
        }
        if inv.iter().any(|&i| i == usize::MAX) {
            return Err(GroupoidError::Format("missing arrow ids".into()));
        }
        let mut product = BTreeMap::new();
        for &[g, h, p] in &j.product {
            product.insert((g, h), p);
        }
        Ok(FiniteGroupoid {
            n_arrows: n,
            inv,
            product,
            labels,
        })
    }

    /// DOT digraph: units as nodes, arrows as labeled edges d(γ) → r(γ).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph groupoid {\n");
        for u in self.units() {
            out.push_str(&format!(
                "  u{} [label=\"{}\" shape=circle];\n",
                u, self.labels[u]
            ));
        }
        for g in 0..self.n_arrows {
            if self.is_unit(g) {
                continue;
            }
            let (d, r) = (
                self.source(g).expect("valid groupoid"),
                self.range(g).expect("valid groupoid"),
            );
            out.push_str(&format!("  u{} -> u{} [label=\"{}\"];\n", d, r, self.labels[g]));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupoidJson {
    pub units: Vec<UnitJson>,
    pub arrows: Vec<ArrowJson>,
    pub product: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitJson {
    pub id: usize,
    pub label: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: usize,
    pub label: String,
    pub src: usize,
    pub rng: usize,
    pub inv: usize,
}

/// An arrow map between groupoids, total on the source's arrows.
#[derive(Clone, Debug)]
pub struct GroupoidHom {
    pub map: Vec<usize>,
}

/// Exhaustive homomorphism check: composable pairs map to composable
/// pairs with matching products, plus the derived identities
/// φ∘inv = inv∘φ, r∘φ = φ∘r, d∘φ = φ∘d.
pub fn is_homomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid, phi: &GroupoidHom) -> bool {
    if phi.map.len() != g.n_arrows {
        return false;
    }
    if phi.map.iter().any(|&v| v >= h.n_arrows) {
        return false;
    }
    for (&(a, b), &p) in &g.product {
        match h.compose(phi.map[a], phi.map[b]) {
            Some(q) if q == phi.map[p] => {}
            _ => return false,
        }
    }
    for a in 0..g.n_arrows {
        if phi.map[g.inv[a]] != h.inv[phi.map[a]] {
            return false;
        }
        let (sd, sr) = (g.source(a), g.range(a));
        let (td, tr) = (h.source(phi.map[a]), h.range(phi.map[a]));
        if sd.map(|x| phi.map[x]) != td || sr.map(|x| phi.map[x]) != tr {
            return false;
        }
    }
    true
}

/// φ restricted to every source fiber G_x → H_{φ(x)} is a bijection.
pub fn is_d_bijective(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    phi: &GroupoidHom,
) -> Result<bool, GroupoidError> {
    if !is_homomorphism(g, h, phi) {
        return Err(GroupoidError::NotAHomomorphism);
    }
    for x in g.units() {
        let fiber = g.d_fiber(x)?;
        let target: BTreeSet<usize> = h.d_fiber(phi.map[x])?.into_iter().collect();
        let image: BTreeSet<usize> = fiber.iter().map(|&a| phi.map[a]).collect();
        if image.len() != fiber.len() || image != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// φ restricted to every range fiber G^x → H^{φ(x)} is a bijection.
pub fn is_r_bijective(
    g: &FiniteGroupoid,
    h: &FiniteGroupoid,
    phi: &GroupoidHom,
) -> Result<bool, GroupoidError> {
    if !is_homomorphism(g, h, phi) {
        return Err(GroupoidError::NotAHomomorphism);
    }
    for x in g.units() {
        let fiber = g.r_fiber(x)?;
        let target: BTreeSet<usize> = h.r_fiber(phi.map[x])?.into_iter().collect();
        let image: BTreeSet<usize> = fiber.iter().map(|&a| phi.map[a]).collect();
        if image.len() != fiber.len() || image != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite group as a one-unit groupoid (arrow 0 = identity).
pub fn group_groupoid(mul: &[Vec<usize>], inv: Vec<usize>) -> FiniteGroupoid {
    let n = mul.len();
    let mut product = BTreeMap::new();
    for (a, row) in mul.iter().enumerate() {
        for (b, &p) in row.iter().enumerate() {
            product.insert((a, b), p);
        }
    }
    FiniteGroupoid::new(n, inv, product)
}
