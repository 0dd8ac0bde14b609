//! The groupoid of germs of an action: arrows are classes [s,x] with
//! d([s,x]) = x, r([s,x]) = α_s(x), [t, α_s(x)][s,x] = [ts,x].

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::action::Action;
use crate::groupoid::FiniteGroupoid;

#[derive(Debug, Error)]
pub enum GermError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("point {0} not in the domain of α_{1}")]
    DomainViolation(String, String),
}

/// A finite groupoid of germs, remembering which (element, point) pair
/// canonically represents each arrow.
#[derive(Clone, Debug)]
pub struct GermGroupoid {
    groupoid: FiniteGroupoid,
    action: Action,
    /// Least (element, point) representative per arrow, in arrow order.
    class_rep: Vec<(usize, usize)>,
    class_of: BTreeMap<(usize, usize), usize>,
    /// Arrow id of the unit germ at each point.
    unit_of_point: Vec<usize>,
}

/// Builds the groupoid of germs of a valid action. Classes are
/// canonicalized by least representative, ordered by (point, element).
pub fn build_germ_groupoid(action: &Action) -> Result<GermGroupoid, GermError> {
    let report = action.validate();
    if !report.is_empty() {
        return Err(GermError::InvalidAction(report.join("; ")));
    }
    let sg = action.semigroup().clone();
    let n_points = action.space_size();

    let mut class_rep: Vec<(usize, usize)> = Vec::new();
    let mut class_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in 0..n_points {
        let elems: Vec<usize> = (0..sg.size()).filter(|&s| action.in_domain(s, x)).collect();
        for &s in &elems {
            let existing = elems
                .iter()
                .take_while(|&&t| t < s)
                .find(|&&t| action.germ_equal(s, t, x).expect("domains checked"));
            match existing {
                Some(&t) => {
                    let id = class_of[&(t, x)];
                    class_of.insert((s, x), id);
                }
                None => {
                    let id = class_rep.len();
                    class_rep.push((s, x));
                    class_of.insert((s, x), id);
                }
            }
        }
    }

    let n_arrows = class_rep.len();
    let mut inv = vec![0usize; n_arrows];
    for (id, &(s, x)) in class_rep.iter().enumerate() {
        let y = action.apply(s, x).expect("x in dom α_s");
        inv[id] = class_of[&(sg.inverse(s), y)];
    }
    // Composable: [t,y][s,x] with y = α_s(x); product [ts,x].
    let mut product = BTreeMap::new();
    for (b, &(s, x)) in class_rep.iter().enumerate() {
        let y = action.apply(s, x).expect("x in dom α_s");
        for (a, &(t, yy)) in class_rep.iter().enumerate() {
            if yy == y {
                product.insert((a, b), class_of[&(sg.mul(t, s), x)]);
            }
        }
    }
    let labels = class_rep
        .iter()
        .map(|&(s, x)| format!("[{},{}]", sg.label(s), action.point_label(x)))
        .collect();
    let groupoid = FiniteGroupoid {
        n_arrows,
        inv,
        product,
        labels,
    };
    let unit_of_point = (0..n_points)
        .map(|x| {
            let e = sg
                .idempotents()
                .iter()
                .copied()
                .find(|&e| action.in_domain(e, x))
                .expect("domains cover X");
            class_of[&(e, x)]
        })
        .collect();
    Ok(GermGroupoid {
        groupoid,
        action: action.clone(),
        class_rep,
        class_of,
        unit_of_point,
    })
}

impl GermGroupoid {
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn n_arrows(&self) -> usize {
        self.groupoid.n_arrows
    }

    pub fn class_rep(&self, arrow: usize) -> (usize, usize) {
        self.class_rep[arrow]
    }

    /// Arrow id of the germ [s,x], if x ∈ dom α_s.
    pub fn class_of(&self, s: usize, x: usize) -> Option<usize> {
        self.class_of.get(&(s, x)).copied()
    }

    pub fn unit_at(&self, x: usize) -> usize {
        self.unit_of_point[x]
    }

    /// The point whose unit germ is the given unit arrow.
    pub fn point_of_unit(&self, unit: usize) -> Option<usize> {
        self.unit_of_point.iter().position(|&u| u == unit)
    }

    /// Θ(s, U) = {[s,x] : x ∈ U}. Errors when U ⊄ dom α_s.
    pub fn basis_arrow_set(&self, s: usize, points: &[usize]) -> Result<BTreeSet<usize>, GermError> {
        let mut out = BTreeSet::new();
        for &x in points {
            match self.class_of(s, x) {
                Some(id) => {
                    out.insert(id);
                }
                None => {
                    return Err(GermError::DomainViolation(
                        self.action.point_label(x).to_string(),
                        self.action.semigroup().label(s).to_string(),
                    ))
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::wagner_preston;
    use crate::semigroup::{cyclic_group_table, double_zero_cyclic, group_with_zero, symmetric_inverse_monoid};
    use crate::spectrum::canonical_action;
    use std::sync::Arc;

    #[test]
    fn group_acting_on_a_point_gives_the_group() {
        // G⁰ = Z/3 with zero, acting on one point by α_g = id.
        let (labels, table) = cyclic_group_table(3);
        let sg = Arc::new(group_with_zero(&labels, &table).unwrap());
        let maps: Vec<_> = (0..sg.size())
            .map(|s| {
                if s == sg.zero() {
                    crate::partial::PartialBijection::empty(1)
                } else {
                    crate::partial::PartialBijection::identity(1)
                }
            })
            .collect();
        let a = Action::new(sg, vec!["pt".into()], maps);
        let gg = build_germ_groupoid(&a).unwrap();
        assert_eq!(gg.groupoid().units().len(), 1);
        assert_eq!(gg.n_arrows(), 3);
        assert!(gg.groupoid().check_axioms().unwrap().is_empty());
    }

    #[test]
    fn remark_canonical_groupoid_shape() {
        // Universal groupoid: group fiber at {1} plus an isolated point.
        let sg = double_zero_cyclic(2);
        let gg = build_germ_groupoid(&canonical_action(&sg)).unwrap();
        assert_eq!(gg.groupoid().units().len(), 2);
        assert_eq!(gg.n_arrows(), 3);
        assert!(gg.groupoid().check_axioms().unwrap().is_empty());
    }

    #[test]
    fn germ_groupoids_pass_axioms() {
        for sg in [
            Arc::new(symmetric_inverse_monoid(2).unwrap()),
            Arc::new(symmetric_inverse_monoid(3).unwrap()),
            double_zero_cyclic(3),
        ] {
            for a in [wagner_preston(&sg), canonical_action(&sg)] {
                let gg = build_germ_groupoid(&a).unwrap();
                assert!(gg.groupoid().check_axioms().unwrap().is_empty());
            }
        }
    }

    #[test]
    fn invalid_action_is_refused() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let mut maps = crate::semigroup::enumerate_partial_bijections(2);
        maps.swap(1, 2);
        let a = Action::new(sg, vec!["p".into(), "q".into()], maps);
        assert!(matches!(
            build_germ_groupoid(&a),
            Err(GermError::InvalidAction(_))
        ));
    }

    #[test]
    fn source_and_range_match_the_definition() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let a = wagner_preston(&sg);
        let gg = build_germ_groupoid(&a).unwrap();
        for arrow in 0..gg.n_arrows() {
            let (s, x) = gg.class_rep(arrow);
            let y = a.apply(s, x).unwrap();
            assert_eq!(gg.groupoid().source(arrow), Some(gg.unit_at(x)));
            assert_eq!(gg.groupoid().range(arrow), Some(gg.unit_at(y)));
            // [s,x]⁻¹[s,x] = unit at x, [s,x][s,x]⁻¹ = unit at α_s(x).
            let inv = gg.groupoid().inv[arrow];
            assert_eq!(gg.groupoid().compose(inv, arrow), Some(gg.unit_at(x)));
            assert_eq!(gg.groupoid().compose(arrow, inv), Some(gg.unit_at(y)));
        }
    }

    #[test]
    fn d_fiber_matches_germ_classes() {
        let sg = double_zero_cyclic(3);
        let a = canonical_action(&sg);
        let gg = build_germ_groupoid(&a).unwrap();
        for x in 0..a.space_size() {
            let fiber = gg.groupoid().d_fiber(gg.unit_at(x)).unwrap();
            let classes: BTreeSet<usize> = (0..sg.size())
                .filter(|&s| a.in_domain(s, x))
                .map(|s| gg.class_of(s, x).unwrap())
                .collect();
            assert_eq!(fiber.into_iter().collect::<BTreeSet<_>>(), classes);
        }
    }

    #[test]
    fn basis_arrow_sets() {
        let sg = Arc::new(symmetric_inverse_monoid(2).unwrap());
        let a = wagner_preston(&sg);
        let gg = build_germ_groupoid(&a).unwrap();
        for s in 0..sg.size() {
            let dom = a.map(s).domain();
            assert_eq!(gg.basis_arrow_set(s, &[]).unwrap().len(), 0);
            let full = gg.basis_arrow_set(s, &dom).unwrap();
            assert_eq!(full.len(), dom.len());
        }
        // Unit germs: Θ(e, D_e) consists of units.
        for &e in sg.idempotents() {
            let dom = a.map(e).domain();
            for arrow in gg.basis_arrow_set(e, &dom).unwrap() {
                assert!(gg.groupoid().is_unit(arrow));
            }
        }
        // Domain violation outside dom α_s.
        let zero = sg.zero();
        if a.space_size() > 0 {
            assert!(gg.basis_arrow_set(zero, &[0]).is_err());
        }
        // Every arrow is some [s,x].
        let mut all = BTreeSet::new();
        for s in 0..sg.size() {
            all.extend(gg.basis_arrow_set(s, &a.map(s).domain()).unwrap());
        }
        assert_eq!(all.len(), gg.n_arrows());
    }
}
