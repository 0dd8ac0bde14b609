//! Actions of a finite inverse semigroup on a finite discrete space:
//! validation, germ equivalence, restriction/union/relabeling, and the
//! action file format.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::partial::{compose_partial, PartialBijection};
use crate::semigroup::InverseSemigroup;

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("point {point} not in the domain of α_{elem}")]
    DomainViolation { elem: String, point: String },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("subset is not invariant: α_{elem}({from}) = {to} leaves it")]
    NotInvariant {
        elem: String,
        from: String,
        to: String,
    },
    #[error("action file: {0}")]
    Format(String),
    #[error("listed elements do not generate the semigroup; {0} elements underived")]
    Underdetermined(usize),
    #[error("homomorphism closure conflict at {0}·{1}")]
    ClosureConflict(String, String),
}

/// An assignment s ↦ α_s ∈ I(X), one partial bijection per element.
///
/// Finite discrete X makes the continuity and open-domain requirements
/// vacuous; `validate` checks the algebraic ones.
#[derive(Clone, Debug)]
pub struct Action {
    semigroup: Arc<InverseSemigroup>,
    space: Vec<String>,
    maps: Vec<PartialBijection>,
}

impl Action {
    pub fn new(
        semigroup: Arc<InverseSemigroup>,
        space: Vec<String>,
        maps: Vec<PartialBijection>,
    ) -> Self {
        Action {
            semigroup,
            space,
            maps,
        }
    }

    pub fn semigroup(&self) -> &Arc<InverseSemigroup> {
        &self.semigroup
    }

    pub fn space_size(&self) -> usize {
        self.space.len()
    }

    pub fn point_label(&self, x: usize) -> &str {
        &self.space[x]
    }

    pub fn point_labels(&self) -> &[String] {
        &self.space
    }

    pub fn map(&self, s: usize) -> &PartialBijection {
        &self.maps[s]
    }

    pub fn apply(&self, s: usize, x: usize) -> Option<usize> {
        self.maps[s].apply(x)
    }

    pub fn in_domain(&self, s: usize, x: usize) -> bool {
        self.maps[s].apply(x).is_some()
    }

    /// Report-style validator: every failed invariant with a witness.
    /// Empty report means the action is valid.
    pub fn validate(&self) -> Vec<String> {
        let s = &self.semigroup;
        let n = s.size();
        let mut report = Vec::new();
        if self.maps.len() != n {
            report.push(format!(
                "assignment covers {} elements, semigroup has {}",
                self.maps.len(),
                n
            ));
            return report;
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.space_size() != self.space.len() {
                report.push(format!(
                    "α_{} acts on a space of size {}, expected {}",
                    s.label(i),
                    m.space_size(),
                    self.space.len()
                ));
                return report;
            }
        }
        if !self.maps[s.zero()].is_empty() {
            report.push("zero not empty map".to_string());
        }
        // Homomorphism under largest-domain composition.
        for a in 0..n {
            for b in 0..n {
                let composed = compose_partial(&self.maps[a], &self.maps[b]);
                if composed != self.maps[s.mul(a, b)] {
                    report.push(format!(
                        "not a homomorphism at ({}, {}): α_{}∘α_{} ≠ α_{}",
                        s.label(a),
                        s.label(b),
                        s.label(a),
                        s.label(b),
                        s.label(s.mul(a, b))
                    ));
                }
            }
        }
        // Domains cover X.
        for x in 0..self.space.len() {
            if !(0..n).any(|e| self.in_domain(e, x)) {
                report.push(format!("point {} not in any domain", self.space[x]));
            }
        }
        // dom α_s = dom α_{s*s} and α_{s*} = α_s⁻¹.
        for a in 0..n {
            let ss = s.mul(s.inverse(a), a);
            if self.maps[a].domain() != self.maps[ss].domain() {
                report.push(format!(
                    "dom α_{} ≠ dom α_{}",
                    s.label(a),
                    s.label(ss)
                ));
            }
            if self.maps[s.inverse(a)] != self.maps[a].inverse() {
                report.push(format!("α_{}* is not the inverse map", s.label(a)));
            }
        }
        for &e in s.idempotents() {
            if !self.maps[e].is_partial_identity() {
                report.push(format!("α_{} is not a partial identity", s.label(e)));
            }
        }
        report
    }

    /// Germ equivalence at x: [s,x] = [t,x] iff some idempotent e has
    /// x ∈ D_e and se = te.
    pub fn germ_equal(&self, s: usize, t: usize, x: usize) -> Result<bool, ActionError> {
        let sg = &self.semigroup;
        for (name, elem) in [("s", s), ("t", t)] {
            let _ = name;
            if !self.in_domain(elem, x) {
                return Err(ActionError::DomainViolation {
                    elem: sg.label(elem).to_string(),
                    point: self.space[x].to_string(),
                });
            }
        }
        Ok(sg.idempotents().iter().any(|&e| {
            self.in_domain(e, x) && sg.mul(s, e) == sg.mul(t, e)
        }))
    }

    /// Restriction to an invariant subset of the space.
    pub fn restrict(&self, points: &BTreeSet<usize>) -> Result<Action, ActionError> {
        let sg = &self.semigroup;
        for &x in points {
            for s in 0..sg.size() {
                if let Some(y) = self.apply(s, x) {
                    if !points.contains(&y) {
                        return Err(ActionError::NotInvariant {
                            elem: sg.label(s).to_string(),
                            from: self.space[x].clone(),
                            to: self.space[y].clone(),
                        });
                    }
                }
            }
        }
        let old: Vec<usize> = points.iter().copied().collect();
        let new_index = |x: usize| old.iter().position(|&o| o == x);
        let space: Vec<String> = old.iter().map(|&x| self.space[x].clone()).collect();
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let pairs: Vec<(usize, usize)> = old
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &x)| {
                        m.apply(x)
                            .map(|y| (i, new_index(y).expect("invariance checked")))
                    })
                    .collect();
                PartialBijection::from_pairs(old.len(), &pairs).expect("restriction is injective")
            })
            .collect();
        Ok(Action::new(sg.clone(), space, maps))
    }

    /// Disjoint union of two actions of the same semigroup.
    pub fn disjoint_union(&self, other: &Action) -> Action {
        assert!(Arc::ptr_eq(&self.semigroup, &other.semigroup) ||
            self.semigroup.labels() == other.semigroup.labels());
        let n = self.space.len() + other.space.len();
        let mut space = self.space.clone();
        space.extend(other.space.iter().map(|l| format!("{l}'")));
        dedupe_labels(&mut space);
        let maps = (0..self.semigroup.size())
            .map(|s| {
                let mut pairs: Vec<(usize, usize)> = self.space_points(s);
                pairs.extend(
                    other
                        .space_points(s)
                        .into_iter()
                        .map(|(x, y)| (x + self.space.len(), y + self.space.len())),
                );
                PartialBijection::from_pairs(n, &pairs).expect("union of disjoint bijections")
            })
            .collect();
        Action::new(self.semigroup.clone(), space, maps)
    }

    fn space_points(&self, s: usize) -> Vec<(usize, usize)> {
        (0..self.space.len())
            .filter_map(|x| self.apply(s, x).map(|y| (x, y)))
            .collect()
    }

    /// Conjugates the action by a permutation of the space (new point
    /// perm[x] plays the role of old point x).
    pub fn relabel(&self, perm: &[usize]) -> Action {
        let n = self.space.len();
        assert_eq!(perm.len(), n);
        let mut space = vec![String::new(); n];
        for x in 0..n {
            space[perm[x]] = self.space[x].clone();
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .filter_map(|x| m.apply(x).map(|y| (perm[x], perm[y])))
                    .collect();
                PartialBijection::from_pairs(n, &pairs).expect("conjugate of a bijection")
            })
            .collect();
        Action::new(self.semigroup.clone(), space, maps)
    }

    /// Orbit partition of the space under x ~ α_s(x).
    pub fn orbits(&self) -> Vec<BTreeSet<usize>> {
        let n = self.space.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for s in 0..self.semigroup.size() {
            for x in 0..n {
                if let Some(y) = self.apply(s, x) {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    parent[a] = b;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for x in 0..n {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().insert(x);
        }
        groups.into_values().collect()
    }
}

fn dedupe_labels(labels: &mut [String]) {
    let mut seen = BTreeSet::new();
    for l in labels.iter_mut() {
        while !seen.insert(l.clone()) {
            l.push('\'');
        }
    }
}

/// Wagner–Preston action of S on S \ {0}: α_s(x) = sx on
/// {x ≠ 0 : s*s·x = x}. Every inverse semigroup acts faithfully this way.
pub fn wagner_preston(semigroup: &Arc<InverseSemigroup>) -> Action {
    let sg = semigroup;
    let points: Vec<usize> = (0..sg.size()).filter(|&x| x != sg.zero()).collect();
    let space: Vec<String> = points.iter().map(|&x| sg.label(x).to_string()).collect();
    let maps = (0..sg.size())
        .map(|s| {
            let ss = sg.mul(sg.inverse(s), s);
            let pairs: Vec<(usize, usize)> = points
                .iter()
                .enumerate()
                .filter(|&(_, &x)| sg.mul(ss, x) == x)
                .map(|(i, &x)| {
                    let y = sg.mul(s, x);
                    let j = points.iter().position(|&p| p == y).expect("sx nonzero");
                    (i, j)
                })
                .collect();
            PartialBijection::from_pairs(points.len(), &pairs)
                .expect("left translation is injective on its domain")
        })
        .collect();
    Action::new(sg.clone(), space, maps)
}

/// Parses an action file:
/// ```text
/// # comment
/// semigroup path/to/table.sgrp   (or: inline, resolved by the caller)
/// space x1 x2 x3
/// s: x1->y1, x2->y2
/// t:
/// ```
/// Elements not listed are derived by homomorphism closure when the
/// listed ones generate S.
pub struct ActionFile {
    pub semigroup_path: String,
    pub space: Vec<String>,
    pub assignments: Vec<(String, Vec<(String, String)>)>,
}

pub fn parse_action_file(text: &str) -> Result<ActionFile, ActionError> {
    let mut semigroup_path = None;
    let mut space: Option<Vec<String>> = None;
    let mut assignments = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("semigroup ") {
            semigroup_path = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("space ") {
            space = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some((elem, mapping)) = line.split_once(':') {
            let mut pairs = Vec::new();
            for part in mapping.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (x, y) = part.split_once("->").ok_or_else(|| {
                    ActionError::Format(format!("line {}: expected x->y, got {part:?}", lineno + 1))
                })?;
                pairs.push((x.trim().to_string(), y.trim().to_string()));
            }
            assignments.push((elem.trim().to_string(), pairs));
        } else {
            return Err(ActionError::Format(format!(
                "line {}: unrecognized line {line:?}",
                lineno + 1
            )));
        }
    }
    Ok(ActionFile {
        semigroup_path: semigroup_path
            .ok_or_else(|| ActionError::Format("missing 'semigroup' header".into()))?,
        space: space.ok_or_else(|| ActionError::Format("missing 'space' header".into()))?,
        assignments,
    })
}

/// Builds an action from parsed assignments, deriving omitted elements
/// by homomorphism closure (α_{st} := α_s∘α_t) and then validating.
pub fn action_from_assignments(
    semigroup: Arc<InverseSemigroup>,
    space: Vec<String>,
    assignments: &[(String, Vec<(String, String)>)],
) -> Result<Action, ActionError> {
    let sg = semigroup.clone();
    let n = sg.size();
    let point_index = |l: &str| {
        space
            .iter()
            .position(|p| p == l)
            .ok_or_else(|| ActionError::Format(format!("unknown point label {l:?}")))
    };
    let mut maps: Vec<Option<PartialBijection>> = vec![None; n];
    // The zero always acts as the empty map.
    maps[sg.zero()] = Some(PartialBijection::empty(space.len()));
    for (elem, pairs) in assignments {
        let s = sg
            .index_of(elem)
            .ok_or_else(|| ActionError::Format(format!("unknown element label {elem:?}")))?;
        let mut idx_pairs = Vec::new();
        for (x, y) in pairs {
            idx_pairs.push((point_index(x)?, point_index(y)?));
        }
        let pb = PartialBijection::from_pairs(space.len(), &idx_pairs)
            .map_err(|e| ActionError::Format(format!("α_{elem}: {e}")))?;
        if let Some(existing) = &maps[s] {
            if *existing != pb {
                return Err(ActionError::Format(format!(
                    "conflicting assignments for element {elem}"
                )));
            }
        }
        maps[s] = Some(pb);
    }
    // Homomorphism closure.
    loop {
        let mut progressed = false;
        for a in 0..n {
            for b in 0..n {
                let (Some(fa), Some(fb)) = (&maps[a], &maps[b]) else {
                    continue;
                };
                let ab = sg.mul(a, b);
                let composed = compose_partial(fa, fb);
                match &maps[ab] {
                    Some(existing) => {
                        if *existing != composed {
                            return Err(ActionError::ClosureConflict(
                                sg.label(a).to_string(),
                                sg.label(b).to_string(),
                            ));
                        }
                    }
                    None => {
                        maps[ab] = Some(composed);
                        progressed = true;
                    }
                }
            }
        }
        if !progressed {
            break;
        }
    }
    let missing = maps.iter().filter(|m| m.is_none()).count();
    if missing > 0 {
        return Err(ActionError::Underdetermined(missing));
    }
    let action = Action::new(semigroup, space, maps.into_iter().flatten().collect());
    let report = action.validate();
    if !report.is_empty() {
        return Err(ActionError::InvalidAction(report.join("; ")));
    }
    Ok(action)
}

/// Serializes an action in the action file format.
pub fn action_to_file_string(action: &Action, semigroup_path: &str) -> String {
    use std::fmt::Write as _;
    let sg = action.semigroup();
    let mut out = String::new();
    let _ = writeln!(out, "semigroup {semigroup_path}");
    let _ = writeln!(out, "space {}", action.point_labels().join(" "));
    for s in 0..sg.size() {
        let pairs: Vec<String> = (0..action.space_size())
            .filter_map(|x| {
                action
                    .apply(s, x)
                    .map(|y| format!("{}->{}", action.point_label(x), action.point_label(y)))
            })
            .collect();
        let _ = writeln!(out, "{}: {}", sg.label(s), pairs.join(", "));
    }
    out
}
