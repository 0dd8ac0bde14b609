//! Finite inverse semigroups with zero, given by multiplication tables.
//!
//! Validation is exhaustive: associativity over all triples, absorbing
//! zero, and a unique inverse for every element. Elements are dense
//! integer indices internally; labels are kept for I/O.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::partial::{compose_partial, PartialBijection};

/// Default cap on |S| for exhaustive validation.
pub const DEFAULT_MAX_ELEMENTS: usize = 2000;
/// Default cap on n for I(n) enumeration.
pub const DEFAULT_MAX_SYMMETRIC: usize = 5;

#[derive(Debug, Error)]
pub enum SemigroupError {
    #[error("not associative: ({s}·{t})·{u} = {left} but {s}·({t}·{u}) = {right}")]
    NotAssociative {
        s: String,
        t: String,
        u: String,
        left: String,
        right: String,
    },
    #[error("element {element} has {count} candidate inverses, expected exactly 1")]
    NoUniqueInverse { element: String, count: usize },
    #[error("designated zero {zero} is not absorbing: witness {witness}")]
    ZeroNotAbsorbing { zero: String, witness: String },
    #[error("element {0} is not idempotent")]
    NotIdempotent(String),
    #[error("size guard exceeded: {what} = {got}, limit {limit} (override with --max-size)")]
    SizeGuard {
        what: String,
        got: usize,
        limit: usize,
    },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("table row for {0:?} has {1} entries, expected {2}")]
    RowLength(String, usize, usize),
    #[error("table file: {0}")]
    TableFormat(String),
}

/// A finite inverse semigroup with a distinguished absorbing zero.
///
/// Immutable after construction; inverses and idempotents are cached.
#[derive(Clone, Debug)]
pub struct InverseSemigroup {
    labels: Vec<String>,
    table: Vec<usize>,
    zero: usize,
    inv: Vec<usize>,
    idempotents: Vec<usize>,
    zero_adjoined: bool,
}

impl InverseSemigroup {
    /// Builds and validates a semigroup from a raw multiplication table.
    ///
    /// `zero_label = None` looks for an absorbing element; when the table
    /// has none, a fresh zero is adjoined (`zero_was_adjoined` reports
    /// this so callers can emit a notice).
    pub fn build_from_table(
        labels: &[String],
        table: &[Vec<String>],
        zero_label: Option<&str>,
    ) -> Result<Self, SemigroupError> {
        Self::build_from_table_guarded(labels, table, zero_label, DEFAULT_MAX_ELEMENTS)
    }

    pub fn build_from_table_guarded(
        labels: &[String],
        table: &[Vec<String>],
        zero_label: Option<&str>,
        max_elements: usize,
    ) -> Result<Self, SemigroupError> {
        let n = labels.len();
        if n > max_elements {
            return Err(SemigroupError::SizeGuard {
                what: "|S|".into(),
                got: n,
                limit: max_elements,
            });
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(SemigroupError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n {
            return Err(SemigroupError::TableFormat(format!(
                "{} rows, expected {}",
                table.len(),
                n
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::RowLength(labels[i].clone(), row.len(), n));
            }
            for entry in row {
                let j = *index
                    .get(entry)
                    .ok_or_else(|| SemigroupError::UnknownLabel(entry.clone()))?;
                flat.push(j);
            }
        }
        let zero = match zero_label {
            Some(z) => Some(
                *index
                    .get(z)
                    .ok_or_else(|| SemigroupError::UnknownLabel(z.to_string()))?,
            ),
            None => (0..n).find(|&z| (0..n).all(|s| flat[z * n + s] == z && flat[s * n + z] == z)),
        };
        match zero {
            Some(zero) => Self::from_indexed(labels.to_vec(), flat, zero, false),
            None => {
                // No absorbing element: adjoin a fresh zero.
                let (labels, flat, zero) = adjoin_zero_raw(labels, &flat);
                Self::from_indexed(labels, flat, zero, true)
            }
        }
    }

    fn from_indexed(
        labels: Vec<String>,
        table: Vec<usize>,
        zero: usize,
        zero_adjoined: bool,
    ) -> Result<Self, SemigroupError> {
        let n = labels.len();
        let mul = |s: usize, t: usize| table[s * n + t];
        // Associativity, all triples.
        for s in 0..n {
            for t in 0..n {
                let st = mul(s, t);
                for u in 0..n {
                    if mul(st, u) != mul(s, mul(t, u)) {
                        return Err(SemigroupError::NotAssociative {
                            s: labels[s].clone(),
                            t: labels[t].clone(),
                            u: labels[u].clone(),
                            left: labels[mul(st, u)].clone(),
                            right: labels[mul(s, mul(t, u))].clone(),
                        });
                    }
                }
            }
        }
        for s in 0..n {
            if mul(zero, s) != zero || mul(s, zero) != zero {
                return Err(SemigroupError::ZeroNotAbsorbing {
                    zero: labels[zero].clone(),
                    witness: labels[s].clone(),
                });
            }
        }
        // Unique inverse per element.
        let mut inv = vec![0usize; n];
        for s in 0..n {
            let candidates: Vec<usize> = (0..n)
                .filter(|&t| mul(mul(s, t), s) == s && mul(mul(t, s), t) == t)
                .collect();
            if candidates.len() != 1 {
                return Err(SemigroupError::NoUniqueInverse {
                    element: labels[s].clone(),
                    count: candidates.len(),
                });
            }
            inv[s] = candidates[0];
        }
        let idempotents: Vec<usize> = (0..n).filter(|&e| mul(e, e) == e).collect();
        debug_assert!(idempotents
            .iter()
            .all(|&e| idempotents.iter().all(|&f| mul(e, f) == mul(f, e))));
        Ok(InverseSemigroup {
            labels,
            table,
            zero,
            inv,
            idempotents,
            zero_adjoined,
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s * self.labels.len() + t]
    }

    pub fn inverse(&self, s: usize) -> usize {
        self.inv[s]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn zero_was_adjoined(&self) -> bool {
        self.zero_adjoined
    }

    /// Idempotents in element order.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn nonzero_idempotents(&self) -> Vec<usize> {
        self.idempotents
            .iter()
            .copied()
            .filter(|&e| e != self.zero)
            .collect()
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    /// e ⩽ f iff ef = e, for idempotents.
    pub fn natural_leq(&self, e: usize, f: usize) -> Result<bool, SemigroupError> {
        for x in [e, f] {
            if !self.is_idempotent(x) {
                return Err(SemigroupError::NotIdempotent(self.labels[x].clone()));
            }
        }
        Ok(self.mul(e, f) == e)
    }

    pub fn label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Adjoins a fresh absorbing element as the new zero; the previous
    /// zero becomes an ordinary nonzero idempotent.
    pub fn adjoin_zero(&self) -> InverseSemigroup {
        let (labels, table, zero) = adjoin_zero_raw(&self.labels, &self.table);
        InverseSemigroup::from_indexed(labels, table, zero, false)
            .expect("adjoining a zero preserves the inverse semigroup axioms")
    }

    /// Serializes in the table file format (labels / zero / rows).
    pub fn to_table_string(&self) -> String {
        let n = self.size();
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.labels.join(" "));
        let _ = writeln!(out, "{}", self.labels[self.zero]);
        for s in 0..n {
            let row: Vec<&str> = (0..n).map(|t| self.label(self.mul(s, t))).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

fn adjoin_zero_raw(labels: &[String], table: &[usize]) -> (Vec<String>, Vec<usize>, usize) {
    let n = labels.len();
    let mut new_labels = labels.to_vec();
    new_labels.push(fresh_zero_label(labels));
    let z = n;
    let mut new_table = vec![z; (n + 1) * (n + 1)];
    for s in 0..n {
        for t in 0..n {
            new_table[s * (n + 1) + t] = table[s * n + t];
        }
    }
    (new_labels, new_table, z)
}

fn fresh_zero_label(labels: &[String]) -> String {
    let mut candidate = "0".to_string();
    while labels.iter().any(|l| *l == candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Parses the table file format: comment lines start with '#'; line 1 is
/// the label list, line 2 the zero label (or `-` to auto-detect), then
/// |S| rows of |S| labels.
pub fn parse_table_file(text: &str) -> Result<InverseSemigroup, SemigroupError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let labels: Vec<String> = lines
        .next()
        .ok_or_else(|| SemigroupError::TableFormat("missing label line".into()))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let zero_line = lines
        .next()
        .ok_or_else(|| SemigroupError::TableFormat("missing zero line".into()))?;
    let zero = if zero_line == "-" { None } else { Some(zero_line) };
    let mut rows = Vec::new();
    for line in lines {
        rows.push(
            line.split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>(),
        );
    }
    if rows.len() != labels.len() {
        return Err(SemigroupError::TableFormat(format!(
            "{} table rows, expected {}",
            rows.len(),
            labels.len()
        )));
    }
    InverseSemigroup::build_from_table(&labels, &rows, zero)
}

/// The symmetric inverse monoid I(n): all partial bijections on an
/// n-point set under largest-domain composition, zero = empty map.
///
/// Element order: ascending domain bitmask, then image tuple, so the
/// empty map is element 0.
pub fn symmetric_inverse_monoid(n: usize) -> Result<InverseSemigroup, SemigroupError> {
    symmetric_inverse_monoid_guarded(n, DEFAULT_MAX_SYMMETRIC)
}

pub fn symmetric_inverse_monoid_guarded(
    n: usize,
    max_n: usize,
) -> Result<InverseSemigroup, SemigroupError> {
    if n == 0 || n > max_n {
        return Err(SemigroupError::SizeGuard {
            what: "I(n) space size".into(),
            got: n,
            limit: max_n,
        });
    }
    let elements = enumerate_partial_bijections(n);
    let mut index: HashMap<PartialBijection, usize> = HashMap::new();
    for (i, f) in elements.iter().enumerate() {
        index.insert(f.clone(), i);
    }
    let labels: Vec<String> = elements.iter().map(|f| format!("{f:?}")).collect();
    let m = elements.len();
    let mut table = vec![0usize; m * m];
    for (i, f) in elements.iter().enumerate() {
        for (j, g) in elements.iter().enumerate() {
            table[i * m + j] = index[&compose_partial(f, g)];
        }
    }
    InverseSemigroup::from_indexed(labels, table, 0, false)
}

/// All injective partial maps on `{0,..,n-1}`, ordered by domain mask
/// then image tuple.
pub fn enumerate_partial_bijections(n: usize) -> Vec<PartialBijection> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let domain: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut images: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..domain.len() {
            images = images
                .into_iter()
                .flat_map(|prefix| {
                    (0..n)
                        .filter(|y| !prefix.contains(y))
                        .map(|y| {
                            let mut next = prefix.clone();
                            next.push(y);
                            next
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        images.sort();
        for img in images {
            let pairs: Vec<(usize, usize)> =
                domain.iter().copied().zip(img.iter().copied()).collect();
            out.push(PartialBijection::from_pairs(n, &pairs).expect("images are injective"));
        }
    }
    out
}

/// Validates a group table (identity, inverses, Latin square) and builds
/// the group as an inverse semigroup by adjoining a zero.
pub fn group_with_zero(
    labels: &[String],
    table: &[Vec<String>],
) -> Result<InverseSemigroup, SemigroupError> {
    check_group_table(labels, table)?;
    let n = labels.len();
    let mut index = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(SemigroupError::DuplicateLabel(l.clone()));
        }
    }
    let mut flat = Vec::with_capacity(n * n);
    for row in table {
        for entry in row {
            flat.push(
                *index
                    .get(entry)
                    .ok_or_else(|| SemigroupError::UnknownLabel(entry.clone()))?,
            );
        }
    }
    // Always adjoin, even for the trivial group whose identity is
    // formally absorbing.
    let (labels, flat, zero) = adjoin_zero_raw(labels, &flat);
    InverseSemigroup::from_indexed(labels, flat, zero, true)
}

fn check_group_table(labels: &[String], table: &[Vec<String>]) -> Result<(), SemigroupError> {
    let n = labels.len();
    if n == 0 {
        return Err(SemigroupError::NotAGroup("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(SemigroupError::RowLength(labels[i].clone(), row.len(), n));
        }
        // Latin square rows/columns.
        let mut seen = row.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != n {
            return Err(SemigroupError::NotAGroup(format!(
                "row {} repeats an element",
                labels[i]
            )));
        }
    }
    for j in 0..n {
        let mut col: Vec<&String> = table.iter().map(|r| &r[j]).collect();
        col.sort();
        col.dedup();
        if col.len() != n {
            return Err(SemigroupError::NotAGroup(format!(
                "column {} repeats an element",
                labels[j]
            )));
        }
    }
    // Identity element.
    let id = (0..n).find(|&e| (0..n).all(|s| table[e][s] == labels[s] && table[s][e] == labels[s]));
    if id.is_none() {
        return Err(SemigroupError::NotAGroup("no identity element".into()));
    }
    Ok(())
}

/// Remark-style example: adjoin two successive zeros to a finite group,
/// so E = {1, 0, 0'} with 0' the absorbing zero.
pub fn double_zero_example(
    group_labels: &[String],
    group_table: &[Vec<String>],
) -> Result<InverseSemigroup, SemigroupError> {
    let g0 = group_with_zero(group_labels, group_table)?;
    Ok(g0.adjoin_zero())
}

/// Cyclic group Z/n as a label table (`1, g, g2, ...`).
pub fn cyclic_group_table(n: usize) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(n >= 1);
    let labels: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    let table = (0..n)
        .map(|i| (0..n).map(|j| labels[(i + j) % n].clone()).collect())
        .collect();
    (labels, table)
}

/// Convenience: an `Arc`'d Remark-style semigroup over Z/n.
pub fn double_zero_cyclic(n: usize) -> Arc<InverseSemigroup> {
    let (labels, table) = cyclic_group_table(n);
    Arc::new(double_zero_example(&labels, &table).expect("cyclic tables are groups"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn zero_semigroup_is_valid() {
        let s =
            InverseSemigroup::build_from_table(&strs(&["0"]), &[strs(&["0"])], Some("0")).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.idempotents(), &[0]);
    }

    #[test]
    fn group_with_zero_adjoined() {
        let (labels, table) = cyclic_group_table(2);
        let s = group_with_zero(&labels, &table).unwrap();
        assert_eq!(s.size(), 3);
        assert!(s.zero_was_adjoined());
        let g = s.index_of("g").unwrap();
        assert_eq!(s.inverse(g), g);
        assert_eq!(s.idempotents().len(), 2);
    }

    #[test]
    fn left_zero_semigroup_rejected() {
        // xy = x is associative but not inverse: both x and y are
        // candidate inverses for x.
        let labels = strs(&["x", "y"]);
        let table = vec![strs(&["x", "x"]), strs(&["y", "y"])];
        let err = InverseSemigroup::build_from_table(&labels, &table, None).unwrap_err();
        assert!(matches!(err, SemigroupError::NoUniqueInverse { .. }), "{err}");
    }

    #[test]
    fn non_associative_table_rejected() {
        // 2-element table with a(ab)=/=(aa)b.
        let labels = strs(&["a", "b"]);
        let table = vec![strs(&["b", "a"]), strs(&["a", "a"])];
        let err = InverseSemigroup::build_from_table(&labels, &table, None).unwrap_err();
        assert!(matches!(err, SemigroupError::NotAssociative { .. }), "{err}");
    }

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        assert_eq!(symmetric_inverse_monoid(1).unwrap().size(), 2);
        assert_eq!(symmetric_inverse_monoid(2).unwrap().size(), 7);
        assert_eq!(symmetric_inverse_monoid(3).unwrap().size(), 34);
    }

    #[test]
    fn symmetric_inverse_monoid_guard() {
        assert!(matches!(
            symmetric_inverse_monoid(6),
            Err(SemigroupError::SizeGuard { .. })
        ));
        assert!(symmetric_inverse_monoid_guarded(4, 6).is_ok());
    }

    #[test]
    fn i2_has_four_idempotents() {
        let s = symmetric_inverse_monoid(2).unwrap();
        assert_eq!(s.idempotents().len(), 4);
    }

    #[test]
    fn double_zero_structure() {
        let (labels, table) = cyclic_group_table(2);
        let s = double_zero_example(&labels, &table).unwrap();
        assert_eq!(s.size(), 4);
        let e: Vec<&str> = s.idempotents().iter().map(|&e| s.label(e)).collect();
        assert_eq!(e, vec!["1", "0", "0'"]);
        // 0·0' = 0' (the new zero absorbs).
        let z0 = s.index_of("0").unwrap();
        let z1 = s.index_of("0'").unwrap();
        assert_eq!(s.mul(z0, z1), z1);
        assert_eq!(s.zero(), z1);
    }

    #[test]
    fn double_zero_trivial_group() {
        let s = double_zero_example(&strs(&["1"]), &[strs(&["1"])]).unwrap();
        assert_eq!(s.size(), 3);
    }

    #[test]
    fn not_a_group_rejected() {
        // Idempotent non-group table.
        let labels = strs(&["e", "f"]);
        let table = vec![strs(&["e", "e"]), strs(&["e", "f"])];
        assert!(matches!(
            double_zero_example(&labels, &table),
            Err(SemigroupError::NotAGroup(_))
        ));
    }

    #[test]
    fn natural_leq_is_partial_order_on_i2() {
        let s = symmetric_inverse_monoid(2).unwrap();
        let es = s.idempotents().to_vec();
        for &e in &es {
            assert!(s.natural_leq(s.zero(), e).unwrap());
            assert!(s.natural_leq(e, e).unwrap());
            for &f in &es {
                if s.natural_leq(e, f).unwrap() && s.natural_leq(f, e).unwrap() {
                    assert_eq!(e, f);
                }
                for &g in &es {
                    if s.natural_leq(e, f).unwrap() && s.natural_leq(f, g).unwrap() {
                        assert!(s.natural_leq(e, g).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn natural_leq_rejects_non_idempotents() {
        let (labels, table) = cyclic_group_table(2);
        let s = group_with_zero(&labels, &table).unwrap();
        let g = s.index_of("g").unwrap();
        assert!(matches!(
            s.natural_leq(g, s.zero()),
            Err(SemigroupError::NotIdempotent(_))
        ));
    }

    #[test]
    fn s_star_s_is_idempotent_everywhere() {
        for s in [
            symmetric_inverse_monoid(2).unwrap(),
            symmetric_inverse_monoid(3).unwrap(),
            (*double_zero_cyclic(3)).clone(),
        ] {
            for x in 0..s.size() {
                assert!(s.is_idempotent(s.mul(s.inverse(x), x)));
                assert!(s.is_idempotent(s.mul(x, s.inverse(x))));
                assert_eq!(s.inverse(s.inverse(x)), x);
            }
        }
    }

    #[test]
    fn table_file_round_trip() {
        let s = symmetric_inverse_monoid(2).unwrap();
        let text = s.to_table_string();
        let t = parse_table_file(&text).unwrap();
        assert_eq!(t.size(), s.size());
        for a in 0..s.size() {
            for b in 0..s.size() {
                assert_eq!(t.mul(a, b), s.mul(a, b));
            }
        }
        assert_eq!(t.zero(), s.zero());
    }

    #[test]
    fn inverse_in_ix_is_functional_inverse() {
        let fs = enumerate_partial_bijections(3);
        let s = symmetric_inverse_monoid(3).unwrap();
        for (i, f) in fs.iter().enumerate() {
            let j = fs.iter().position(|g| *g == f.inverse()).unwrap();
            assert_eq!(s.inverse(i), j);
        }
    }
}
