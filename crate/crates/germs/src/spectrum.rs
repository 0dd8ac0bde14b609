//! Filters on the idempotent semilattice, the spectrum, ultrafilters,
//! the tight spectrum, and the canonical action θ on the spectrum.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::action::Action;
use crate::partial::PartialBijection;
use crate::semigroup::InverseSemigroup;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("filter does not contain {0}, so θ_{1} is undefined on it")]
    DomainViolation(String, String),
}

/// A filter in E: nonempty, zero-free, product-closed, upward closed.
/// Members are element indices of idempotents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filter {
    members: BTreeSet<usize>,
}

impl Filter {
    /// Wraps a member set. Callers are responsible for the filter
    /// axioms; `is_filter` checks them.
    pub fn from_members(members: BTreeSet<usize>) -> Filter {
        Filter { members }
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.contains(&e)
    }

    pub fn display(&self, sg: &InverseSemigroup) -> String {
        let labels: Vec<&str> = self.members.iter().map(|&e| sg.label(e)).collect();
        format!("{{{}}}", labels.join(","))
    }
}

/// All filters of an inverse semigroup, in lexicographic member order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    semigroup: Arc<InverseSemigroup>,
    filters: Vec<Filter>,
}

/// Checks the four filter axioms on an arbitrary subset of E.
pub fn is_filter(sg: &InverseSemigroup, subset: &BTreeSet<usize>) -> bool {
    if subset.is_empty() || subset.contains(&sg.zero()) {
        return false;
    }
    if !subset.iter().all(|&e| sg.is_idempotent(e)) {
        return false;
    }
    for &e in subset {
        for &f in subset {
            if !subset.contains(&sg.mul(e, f)) {
                return false;
            }
        }
        for &f in sg.idempotents() {
            if sg.mul(e, f) == e && !subset.contains(&f) {
                return false;
            }
        }
    }
    true
}

/// The principal up-set ↑e = {f ∈ E : e ⩽ f}.
pub fn up_set(sg: &InverseSemigroup, e: usize) -> Filter {
    let members = sg
        .idempotents()
        .iter()
        .copied()
        .filter(|&f| sg.mul(e, f) == e)
        .collect();
    Filter { members }
}

/// Enumerates the spectrum. For finite E every filter is the up-set of
/// the product of its members, so the principal up-sets of the nonzero
/// idempotents are exactly the filters.
pub fn enumerate_filters(sg: &Arc<InverseSemigroup>) -> Spectrum {
    let mut filters: Vec<Filter> = sg
        .nonzero_idempotents()
        .into_iter()
        .map(|e| up_set(sg, e))
        .collect();
    filters.sort();
    filters.dedup();
    Spectrum {
        semigroup: sg.clone(),
        filters,
    }
}

impl Spectrum {
    pub fn semigroup(&self) -> &Arc<InverseSemigroup> {
        &self.semigroup
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn index_of(&self, filter: &Filter) -> Option<usize> {
        self.filters.binary_search(filter).ok()
    }

    /// U(X, Y) = {ξ : X ⊆ ξ, Y ∩ ξ = ∅}, as filter indices.
    pub fn basis_set(&self, contain: &[usize], avoid: &[usize]) -> Vec<usize> {
        (0..self.filters.len())
            .filter(|&i| {
                contain.iter().all(|e| self.filters[i].contains(*e))
                    && avoid.iter().all(|e| !self.filters[i].contains(*e))
            })
            .collect()
    }

    /// Maximal filters under inclusion.
    pub fn ultrafilters(&self) -> Vec<usize> {
        (0..self.filters.len())
            .filter(|&i| {
                !(0..self.filters.len()).any(|j| {
                    j != i
                        && self.filters[i]
                            .members
                            .is_subset(&self.filters[j].members)
                })
            })
            .collect()
    }

    /// Closure of the ultrafilters. The spectrum of a finite semilattice
    /// is discrete, so this coincides with `ultrafilters`.
    pub fn tight_spectrum(&self) -> Vec<usize> {
        self.ultrafilters()
    }
}

/// θ_s(ξ) = {e ∈ E : sfs* ⩽ e for some f ∈ ξ}, defined when s*s ∈ ξ.
pub fn theta_apply(
    sg: &InverseSemigroup,
    s: usize,
    xi: &Filter,
) -> Result<Filter, SpectrumError> {
    let ss = sg.mul(sg.inverse(s), s);
    if !xi.contains(ss) {
        return Err(SpectrumError::DomainViolation(
            sg.label(ss).to_string(),
            sg.label(s).to_string(),
        ));
    }
    let members = sg
        .idempotents()
        .iter()
        .copied()
        .filter(|&e| {
            e != sg.zero()
                && xi.members.iter().any(|&f| {
                    let sfs = sg.mul(sg.mul(s, f), sg.inverse(s));
                    sg.mul(sfs, e) == sfs
                })
        })
        .collect();
    let out = Filter { members };
    debug_assert!(is_filter(sg, &out.members));
    Ok(out)
}

/// The canonical action of S on its spectrum: α_s = θ_s on
/// D_{s*s} = {ξ : s*s ∈ ξ}.
pub fn canonical_action(sg: &Arc<InverseSemigroup>) -> Action {
    let spectrum = enumerate_filters(sg);
    let n = spectrum.len();
    let space: Vec<String> = spectrum
        .filters()
        .iter()
        .map(|f| f.display(sg))
        .collect();
    let maps = (0..sg.size())
        .map(|s| {
            let ss = sg.mul(sg.inverse(s), s);
            let pairs: Vec<(usize, usize)> = (0..n)
                .filter(|&i| spectrum.filters()[i].contains(ss))
                .map(|i| {
                    let image = theta_apply(sg, s, &spectrum.filters()[i])
                        .expect("domain checked");
                    let j = spectrum
                        .index_of(&image)
                        .expect("θ maps filters to filters");
                    (i, j)
                })
                .collect();
            PartialBijection::from_pairs(n, &pairs).expect("θ_s is injective on its domain")
        })
        .collect();
    Action::new(sg.clone(), space, maps)
}

/// Restriction of the canonical action to the tight spectrum.
pub fn tight_action(sg: &Arc<InverseSemigroup>) -> Action {
    let theta = canonical_action(sg);
    let spectrum = enumerate_filters(sg);
    let tight: BTreeSet<usize> = spectrum.tight_spectrum().into_iter().collect();
    theta
        .restrict(&tight)
        .expect("the tight spectrum is invariant under θ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{
        cyclic_group_table, double_zero_cyclic, group_with_zero, symmetric_inverse_monoid,
    };

    /// Test-only oracle: filters by brute force over all subsets of E.
    pub fn brute_force_filters(sg: &InverseSemigroup) -> Vec<Filter> {
        let es = sg.idempotents();
        assert!(es.len() <= 16, "oracle limited to |E| <= 16");
        let mut out = Vec::new();
        for mask in 1u32..(1 << es.len()) {
            let subset: BTreeSet<usize> = es
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            if is_filter(sg, &subset) {
                out.push(Filter { members: subset });
            }
        }
        out.sort();
        out
    }

    #[test]
    fn remark_semigroup_spectrum() {
        let sg = double_zero_cyclic(2);
        let spec = enumerate_filters(&sg);
        let shown: Vec<String> = spec.filters().iter().map(|f| f.display(&sg)).collect();
        assert_eq!(shown, vec!["{1}", "{1,0}"]);
        let ultra = spec.ultrafilters();
        assert_eq!(ultra.len(), 1);
        assert_eq!(spec.filters()[ultra[0]].display(&sg), "{1,0}");
        assert_eq!(spec.tight_spectrum(), ultra);
    }

    #[test]
    fn group_with_zero_has_one_filter() {
        let (labels, table) = cyclic_group_table(3);
        let sg = Arc::new(group_with_zero(&labels, &table).unwrap());
        let spec = enumerate_filters(&sg);
        assert_eq!(spec.len(), 1);
        assert_eq!(spec.ultrafilters().len(), 1);
    }

    #[test]
    fn i2_has_three_filters_two_ultrafilters() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let spec = enumerate_filters(&sg);
        assert_eq!(spec.len(), 3);
        assert_eq!(spec.ultrafilters().len(), 2);
        assert_eq!(spec.tight_spectrum().len(), 2);
    }

    #[test]
    fn principal_enumeration_matches_brute_force() {
        for sg in [
            double_zero_cyclic(2),
            double_zero_cyclic(5),
            Arc::new(symmetric_inverse_monoid(2).unwrap()),
            Arc::new(symmetric_inverse_monoid(3).unwrap()),
        ] {
            let spec = enumerate_filters(&sg);
            assert_eq!(spec.filters().to_vec(), brute_force_filters(&sg));
        }
    }

    #[test]
    fn filters_are_up_sets_of_their_member_product() {
        for sg in [
            double_zero_cyclic(3),
            Arc::new(symmetric_inverse_monoid(3).unwrap()),
        ] {
            for f in enumerate_filters(&sg).filters() {
                let product = f
                    .members()
                    .iter()
                    .copied()
                    .reduce(|a, b| sg.mul(a, b))
                    .unwrap();
                assert_ne!(product, sg.zero());
                assert_eq!(*f, up_set(&sg, product));
            }
        }
    }

    #[test]
    fn singleton_zero_is_not_a_filter() {
        let sg = double_zero_cyclic(2);
        let subset: BTreeSet<usize> = [sg.zero()].into();
        assert!(!is_filter(&sg, &subset));
    }

    #[test]
    fn non_upward_closed_subset_rejected() {
        // In I(2): {id_{0}} without id_{0,1} above it.
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let small = sg
            .nonzero_idempotents()
            .into_iter()
            .find(|&e| up_set(&sg, e).members().len() > 1)
            .unwrap();
        let subset: BTreeSet<usize> = [small].into();
        assert!(!is_filter(&sg, &subset));
    }

    #[test]
    fn basis_sets() {
        let sg = double_zero_cyclic(2);
        let spec = enumerate_filters(&sg);
        assert_eq!(spec.basis_set(&[], &[]).len(), spec.len());
        let zero_idem = sg.index_of("0").unwrap();
        let hits = spec.basis_set(&[zero_idem], &[]);
        assert_eq!(hits.len(), 1);
        assert_eq!(spec.filters()[hits[0]].display(&sg), "{1,0}");
    }

    #[test]
    fn basis_sets_separate_points() {
        let sg = Arc::new(symmetric_inverse_monoid(3).unwrap());
        let spec = enumerate_filters(&sg);
        for i in 0..spec.len() {
            for j in 0..spec.len() {
                if i == j {
                    continue;
                }
                let separated = sg.nonzero_idempotents().iter().any(|&e| {
                    let u = spec.basis_set(&[e], &[]);
                    u.contains(&i) != u.contains(&j)
                });
                assert!(separated);
            }
        }
    }

    #[test]
    fn theta_fixes_filters_containing_an_idempotent() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let spec = enumerate_filters(&sg);
        for &e in sg.idempotents() {
            for f in spec.filters() {
                if f.contains(e) {
                    assert_eq!(theta_apply(&sg, e, f).unwrap(), *f);
                }
            }
        }
    }

    #[test]
    fn theta_on_remark_fixes_the_ultrafilter() {
        let sg = double_zero_cyclic(2);
        let spec = enumerate_filters(&sg);
        let xi = spec
            .filters()
            .iter()
            .find(|f| f.members().len() == 2)
            .unwrap();
        let g = sg.index_of("g").unwrap();
        assert_eq!(theta_apply(&sg, g, xi).unwrap(), *xi);
    }

    #[test]
    fn theta_matches_brute_force_definition_on_i2() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let spec = enumerate_filters(&sg);
        for s in 0..sg.size() {
            let ss = sg.mul(sg.inverse(s), s);
            for f in spec.filters() {
                if !f.contains(ss) {
                    assert!(theta_apply(&sg, s, f).is_err());
                    continue;
                }
                // Independent evaluation of the defining set.
                let direct: BTreeSet<usize> = sg
                    .idempotents()
                    .iter()
                    .copied()
                    .filter(|&e| {
                        f.members().iter().any(|&ff| {
                            let sfs = sg.mul(sg.mul(s, ff), sg.inverse(s));
                            sg.natural_leq(sfs, e).unwrap()
                        }) && e != sg.zero()
                    })
                    .collect();
                assert_eq!(theta_apply(&sg, s, f).unwrap().members(), &direct);
            }
        }
    }

    #[test]
    fn theta_is_functorial() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let spec = enumerate_filters(&sg);
        for s in 0..sg.size() {
            for t in 0..sg.size() {
                let st = sg.mul(s, t);
                for f in spec.filters() {
                    let via_t = theta_apply(&sg, t, f)
                        .ok()
                        .and_then(|ft| theta_apply(&sg, s, &ft).ok());
                    let direct = theta_apply(&sg, st, f).ok();
                    // On the common domain the two routes agree.
                    if let (Some(a), Some(b)) = (&via_t, &direct) {
                        assert_eq!(a, b);
                    }
                    if via_t.is_some() {
                        assert!(direct.is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn theta_inverse_undoes_theta() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let spec = enumerate_filters(&sg);
        for s in 0..sg.size() {
            for f in spec.filters() {
                if let Ok(image) = theta_apply(&sg, s, f) {
                    assert_eq!(theta_apply(&sg, sg.inverse(s), &image).unwrap(), *f);
                }
            }
        }
    }

    #[test]
    fn canonical_action_is_valid() {
        for sg in [
            double_zero_cyclic(2),
            Arc::new(symmetric_inverse_monoid(2).unwrap()),
            Arc::new(symmetric_inverse_monoid(3).unwrap()),
        ] {
            let a = canonical_action(&sg);
            assert!(a.validate().is_empty(), "{:?}", a.validate());
        }
    }

    #[test]
    fn tight_action_of_remark_is_a_single_point() {
        let sg = double_zero_cyclic(2);
        let t = tight_action(&sg);
        assert!(t.validate().is_empty());
        assert_eq!(t.space_size(), 1);
    }
}
