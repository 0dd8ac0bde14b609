//! The point map ρ: X → Ê, ρ(x) = {e : x ∈ D_e}, and the induced arrow
//! map ρ̃: G(α) → G(θ), ρ̃([s,x]) = [s, ρ(x)].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::action::Action;
use crate::germ::{build_germ_groupoid, GermError, GermGroupoid};
use crate::groupoid::GroupoidHom;
use crate::spectrum::{canonical_action, enumerate_filters, Filter, Spectrum};

#[derive(Debug, Error)]
pub enum RhoError {
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error("ρ({0}) is not a point of the spectrum")]
    NotAFilter(String),
    #[error("ρ̃ is not well defined on the class of [{0},{1}]")]
    WellDefinednessFailure(String, String),
}

/// ρ(x): the filter of idempotents whose domain contains x.
pub fn rho_point(action: &Action, x: usize) -> Filter {
    let sg = action.semigroup();
    let members: BTreeSet<usize> = sg
        .idempotents()
        .iter()
        .copied()
        .filter(|&e| action.in_domain(e, x))
        .collect();
    Filter::from_members(members)
}

/// An action α together with the canonical action θ, both germ
/// groupoids, and the maps ρ (points) and ρ̃ (arrows).
pub struct RhoBundle {
    action: Action,
    spectrum: Spectrum,
    galpha: GermGroupoid,
    gtheta: GermGroupoid,
    point_map: Vec<usize>,
    arrow_map: GroupoidHom,
}

impl RhoBundle {
    /// Builds everything from a valid action, verifying that ρ lands in
    /// the spectrum and that ρ̃ is independent of representatives.
    pub fn build(action: &Action) -> Result<RhoBundle, RhoError> {
        let sg = action.semigroup().clone();
        let spectrum = enumerate_filters(&sg);
        let theta = canonical_action(&sg);
        let galpha = build_germ_groupoid(action)?;
        let gtheta = build_germ_groupoid(&theta)?;

        let point_map: Vec<usize> = (0..action.space_size())
            .map(|x| {
                let filter = rho_point(action, x);
                spectrum
                    .index_of(&filter)
                    .ok_or_else(|| RhoError::NotAFilter(action.point_label(x).to_string()))
            })
            .collect::<Result<_, _>>()?;

        let mut arrow_map = vec![usize::MAX; galpha.n_arrows()];
        for x in 0..action.space_size() {
            for s in 0..sg.size() {
                if !action.in_domain(s, x) {
                    continue;
                }
                let src = galpha.class_of(s, x).expect("germ enumerated");
                let tgt = gtheta
                    .class_of(s, point_map[x])
                    .expect("ρ(x) contains s*s when x does");
                if arrow_map[src] != usize::MAX && arrow_map[src] != tgt {
                    return Err(RhoError::WellDefinednessFailure(
                        sg.label(s).to_string(),
                        action.point_label(x).to_string(),
                    ));
                }
                arrow_map[src] = tgt;
            }
        }
        debug_assert!(arrow_map.iter().all(|&v| v != usize::MAX));
        Ok(RhoBundle {
            action: action.clone(),
            spectrum,
            galpha,
            gtheta,
            point_map,
            arrow_map: GroupoidHom { map: arrow_map },
        })
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn germ_groupoid(&self) -> &GermGroupoid {
        &self.galpha
    }

    pub fn canonical_germ_groupoid(&self) -> &GermGroupoid {
        &self.gtheta
    }

    /// Filter index of ρ(x) in the spectrum (= point index in Ê-space).
    pub fn rho(&self, x: usize) -> usize {
        self.point_map[x]
    }

    pub fn rho_tilde(&self) -> &GroupoidHom {
        &self.arrow_map
    }

    /// Exhaustive check of the four facts about ρ, over all points,
    /// idempotents, and element pairs. Empty report = all hold.
    pub fn verify_rhofacts(&self) -> Vec<String> {
        let action = &self.action;
        let theta = self.gtheta.action();
        let sg = action.semigroup();
        let mut report = Vec::new();
        // 1. x ∈ D_e^α ⟺ ρ(x) ∈ D_e^θ.
        for x in 0..action.space_size() {
            for &e in sg.idempotents() {
                if action.in_domain(e, x) != theta.in_domain(e, self.point_map[x]) {
                    report.push(format!(
                        "fact 1 fails at x={}, e={}",
                        action.point_label(x),
                        sg.label(e)
                    ));
                }
            }
        }
        // 2. {s : x ∈ D_{s*s}^α} = {s : ρ(x) ∈ D_{s*s}^θ}.
        for x in 0..action.space_size() {
            for s in 0..sg.size() {
                if action.in_domain(s, x) != theta.in_domain(s, self.point_map[x]) {
                    report.push(format!(
                        "fact 2 fails at x={}, s={}",
                        action.point_label(x),
                        sg.label(s)
                    ));
                }
            }
        }
        // 3. [s]_x^α = [t]_x^α ⟺ [s]_ρ(x)^θ = [t]_ρ(x)^θ.
        for x in 0..action.space_size() {
            let elems: Vec<usize> = (0..sg.size()).filter(|&s| action.in_domain(s, x)).collect();
            for &s in &elems {
                for &t in &elems {
                    let lhs = action.germ_equal(s, t, x).expect("domains checked");
                    let rhs = theta
                        .germ_equal(s, t, self.point_map[x])
                        .expect("fact 2 aligns domains");
                    if lhs != rhs {
                        report.push(format!(
                            "fact 3 fails at x={}, s={}, t={}",
                            action.point_label(x),
                            sg.label(s),
                            sg.label(t)
                        ));
                    }
                }
            }
        }
        // 4. ρ(α_s(x)) = θ_s(ρ(x)).
        for x in 0..action.space_size() {
            for s in 0..sg.size() {
                if let Some(y) = action.apply(s, x) {
                    let lhs = self.point_map[y];
                    let rhs = theta.apply(s, self.point_map[x]);
                    if rhs != Some(lhs) {
                        report.push(format!(
                            "fact 4 fails at x={}, s={}",
                            action.point_label(x),
                            sg.label(s)
                        ));
                    }
                }
            }
        }
        report
    }
}
