//! Amenability certificates on finite groupoids: a finite sequence of
//! arrow functions checked for fiber normalization and asymptotic
//! invariance, orientation conversion, the canonical uniform
//! certificate, and pullback along d-bijective homomorphisms.

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupoid::{is_d_bijective, FiniteGroupoid, GroupoidError, GroupoidHom};

#[derive(Debug, Error)]
pub enum CertError {
    #[error("function {index} has {got} values, groupoid has {expected} arrows")]
    TotalityViolation {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("certificate has no functions")]
    Empty,
    #[error("tolerance schedule has {0} entries, expected {1}")]
    ScheduleLength(usize, usize),
    #[error("tolerance schedule must be nonnegative and nonincreasing")]
    BadSchedule,
    #[error("pullback requires a d-bijective homomorphism")]
    NotDBijective,
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// Whether the fiber conditions quantify over range fibers G^x (with
/// functions g_n) or source fibers G_x (with functions f_n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "r")]
    Range,
    #[serde(rename = "d")]
    Source,
}

/// Scalar type a certificate can be checked over. `f64` for file-loaded
/// certificates, `Rational64` for the exact table-derived ones.
pub trait CertValue:
    Clone + PartialOrd + Signed + Zero + One + ToPrimitive + std::fmt::Debug
{
}
impl<T> CertValue for T where
    T: Clone + PartialOrd + Signed + Zero + One + ToPrimitive + std::fmt::Debug
{
}

/// A finite sequence of arrow functions with a nonincreasing tolerance
/// schedule; the last tolerance is the acceptance threshold for the
/// invariance defect.
#[derive(Clone, Debug)]
pub struct Certificate<V> {
    pub orientation: Orientation,
    /// functions[n][arrow], n = 0..N-1.
    pub functions: Vec<Vec<V>>,
    pub tolerances: Vec<f64>,
}

impl<V: CertValue> Certificate<V> {
    fn validate(&self, g: &FiniteGroupoid) -> Result<(), CertError> {
        if self.functions.is_empty() {
            return Err(CertError::Empty);
        }
        for (index, f) in self.functions.iter().enumerate() {
            if f.len() != g.n_arrows {
                return Err(CertError::TotalityViolation {
                    index,
                    got: f.len(),
                    expected: g.n_arrows,
                });
            }
        }
        if self.tolerances.len() != self.functions.len() {
            return Err(CertError::ScheduleLength(
                self.tolerances.len(),
                self.functions.len(),
            ));
        }
        let ok = self.tolerances.iter().all(|t| *t >= 0.0)
            && self.tolerances.windows(2).all(|w| w[0] >= w[1]);
        if !ok {
            return Err(CertError::BadSchedule);
        }
        Ok(())
    }

    /// Composes every function with the groupoid inverse map, flipping
    /// the orientation. Converting twice is the identity.
    pub fn convert_orientation(&self, g: &FiniteGroupoid) -> Certificate<V> {
        let functions = self
            .functions
            .iter()
            .map(|f| (0..g.n_arrows).map(|a| f[g.inv[a]].clone()).collect())
            .collect();
        Certificate {
            orientation: match self.orientation {
                Orientation::Range => Orientation::Source,
                Orientation::Source => Orientation::Range,
            },
            functions,
            tolerances: self.tolerances.clone(),
        }
    }
}

/// Worst deviation of a fiber sum from 1, with its location.
#[derive(Clone, Debug, Serialize)]
pub struct UnitWitness {
    pub unit: usize,
    pub n: usize,
    pub deviation: f64,
}

/// Outcome of checking a certificate against the three conditions.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// Supremum over units and n of the fiber ℓ¹-sums (condition (a));
    /// always finite on a finite groupoid, reported as a diagnostic.
    pub bound_a: f64,
    pub cond_b_ok: bool,
    pub worst_unit: Option<UnitWitness>,
    /// Units where some fiber sum misses 1 beyond tolerance.
    pub cond_b_witnesses: Vec<UnitWitness>,
    /// Per-n supremum over arrows of the invariance defect.
    pub defects: Vec<f64>,
    pub cond_c_ok: bool,
    pub verdict: bool,
}

impl CheckReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("condition (a): sup fiber l1-sum = {}\n", self.bound_a));
        out.push_str(&format!(
            "condition (b): {}{}\n",
            if self.cond_b_ok { "ok" } else { "FAIL" },
            match &self.worst_unit {
                Some(w) => format!(
                    " (worst unit {} at n={} deviates by {})",
                    w.unit,
                    w.n + 1,
                    w.deviation
                ),
                None => String::new(),
            }
        ));
        out.push_str(&format!(
            "condition (c): {} defects = {:?}\n",
            if self.cond_c_ok { "ok" } else { "FAIL" },
            self.defects
        ));
        out.push_str(&format!(
            "verdict: {}\n",
            if self.verdict { "pass" } else { "fail" }
        ));
        out
    }
}

/// Checks a certificate on a finite groupoid.
///
/// Condition (b) holds when every fiber sum is within `eq_tol` of 1;
/// condition (c) when the defect sequence is nonincreasing within
/// `eq_tol` and the final defect is at most the final tolerance.
pub fn check_certificate<V: CertValue>(
    g: &FiniteGroupoid,
    cert: &Certificate<V>,
    eq_tol: f64,
) -> Result<CheckReport, CertError> {
    cert.validate(g)?;
    let units = g.units();
    let fibers: Vec<Vec<usize>> = units
        .iter()
        .map(|&u| match cert.orientation {
            Orientation::Range => g.r_fiber(u).expect("unit"),
            Orientation::Source => g.d_fiber(u).expect("unit"),
        })
        .collect();

    let mut bound_a: f64 = 0.0;
    let mut worst_unit: Option<UnitWitness> = None;
    let mut cond_b_witnesses = Vec::new();
    for (n, f) in cert.functions.iter().enumerate() {
        for (ui, fiber) in fibers.iter().enumerate() {
            let mut sum = V::zero();
            let mut abs_sum = V::zero();
            for &a in fiber {
                sum = sum + f[a].clone();
                abs_sum = abs_sum + f[a].abs();
            }
            bound_a = bound_a.max(abs_sum.to_f64().unwrap_or(f64::INFINITY));
            let deviation = (sum - V::one())
                .abs()
                .to_f64()
                .unwrap_or(f64::INFINITY);
            if worst_unit
                .as_ref()
                .map(|w| deviation > w.deviation)
                .unwrap_or(true)
            {
                worst_unit = Some(UnitWitness {
                    unit: units[ui],
                    n,
                    deviation,
                });
            }
            if deviation > eq_tol {
                cond_b_witnesses.push(UnitWitness {
                    unit: units[ui],
                    n,
                    deviation,
                });
            }
        }
    }
    let cond_b_ok = cond_b_witnesses.is_empty();

    // Invariance defect: sup over arrows γ of the fiber sum of
    // |f(γ-translate of η) − f(η)|.
    let mut defects = Vec::with_capacity(cert.functions.len());
    for f in &cert.functions {
        let mut sup: f64 = 0.0;
        for gamma in 0..g.n_arrows {
            let anchor = match cert.orientation {
                Orientation::Range => g.range(gamma),
                Orientation::Source => g.source(gamma),
            }
            .expect("valid groupoid");
            let fiber = match cert.orientation {
                Orientation::Range => g.r_fiber(anchor).expect("unit"),
                Orientation::Source => g.d_fiber(anchor).expect("unit"),
            };
            let mut defect = V::zero();
            for eta in fiber {
                let translated = match cert.orientation {
                    // Σ_{r(η)=r(γ)} |g(γ⁻¹η) − g(η)|
                    Orientation::Range => g.compose(g.inv[gamma], eta),
                    // Σ_{d(η)=d(γ)} |f(ηγ⁻¹) − f(η)|
                    Orientation::Source => g.compose(eta, g.inv[gamma]),
                }
                .expect("fiber anchors make the pair composable");
                defect = defect + (f[translated].clone() - f[eta].clone()).abs();
            }
            sup = sup.max(defect.to_f64().unwrap_or(f64::INFINITY));
        }
        defects.push(sup);
    }
    let nonincreasing = defects.windows(2).all(|w| w[1] <= w[0] + eq_tol);
    let final_ok = *defects.last().expect("N >= 1") <= *cert.tolerances.last().expect("N >= 1");
    let cond_c_ok = nonincreasing && final_ok;

    Ok(CheckReport {
        bound_a,
        cond_b_ok,
        worst_unit,
        cond_b_witnesses,
        defects,
        cond_c_ok,
        verdict: cond_b_ok && cond_c_ok,
    })
}

/// The canonical single-function r-form certificate g(γ) = 1/|G^{r(γ)}|
/// with tolerance 0. Left translation bijects the fibers, so the defect
/// is exactly zero and every finite groupoid passes.
pub fn uniform_certificate(g: &FiniteGroupoid) -> Certificate<Rational64> {
    let values = (0..g.n_arrows)
        .map(|a| {
            let r = g.range(a).expect("valid groupoid");
            let fiber = g.r_fiber(r).expect("unit");
            Rational64::new(1, fiber.len() as i64)
        })
        .collect();
    Certificate {
        orientation: Orientation::Range,
        functions: vec![values],
        tolerances: vec![0.0],
    }
}

/// Pulls a certificate back along a d-bijective homomorphism φ by
/// h_n = c_n ∘ φ. An r-form certificate is converted to d-form first.
pub fn pullback_certificate<V: CertValue>(
    source: &FiniteGroupoid,
    target: &FiniteGroupoid,
    phi: &GroupoidHom,
    cert: &Certificate<V>,
) -> Result<Certificate<V>, CertError> {
    match is_d_bijective(source, target, phi) {
        Ok(true) => {}
        Ok(false) => return Err(CertError::NotDBijective),
        Err(GroupoidError::NotAHomomorphism) => return Err(CertError::NotDBijective),
        Err(e) => return Err(e.into()),
    }
    let cert = match cert.orientation {
        Orientation::Source => cert.clone(),
        Orientation::Range => cert.convert_orientation(target),
    };
    let functions = cert
        .functions
        .iter()
        .map(|f| phi.map.iter().map(|&t| f[t].clone()).collect())
        .collect();
    Ok(Certificate {
        orientation: Orientation::Source,
        functions,
        tolerances: cert.tolerances.clone(),
    })
}

/// Verdicts of the full pipeline: check a certificate on the canonical
/// groupoid G(θ), build ρ̃, pull the certificate back, and re-check it
/// on G(α).
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub action_valid: bool,
    pub action_violations: Vec<String>,
    pub rho_tilde_is_homomorphism: bool,
    pub rho_tilde_is_d_bijective: bool,
    pub canonical_report: Option<CheckReport>,
    pub pullback_report: Option<CheckReport>,
    pub pass: bool,
}

impl PipelineReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "action valid: {}\n",
            if self.action_valid { "yes" } else { "no" }
        ));
        for v in &self.action_violations {
            out.push_str(&format!("  violation: {v}\n"));
        }
        out.push_str(&format!(
            "ρ̃ homomorphism: {}, d-bijective: {}\n",
            self.rho_tilde_is_homomorphism, self.rho_tilde_is_d_bijective
        ));
        if let Some(r) = &self.canonical_report {
            out.push_str("certificate on G(θ):\n");
            out.push_str(&r.to_text());
        }
        if let Some(r) = &self.pullback_report {
            out.push_str("pulled-back certificate on G(α):\n");
            out.push_str(&r.to_text());
        }
        out.push_str(&format!(
            "pipeline: {}\n",
            if self.pass { "pass" } else { "fail" }
        ));
        out
    }
}

/// Runs the transport pipeline for one action with the uniform
/// certificate on G(θ) (exact-rational mode, eq_tol 0).
pub fn verify_canonical_transport(action: &crate::action::Action) -> Result<PipelineReport, CertError> {
    let bundle = match crate::rho::RhoBundle::build(action) {
        Ok(b) => b,
        Err(e) => {
            return Ok(PipelineReport {
                action_valid: false,
                action_violations: vec![e.to_string()],
                rho_tilde_is_homomorphism: false,
                rho_tilde_is_d_bijective: false,
                canonical_report: None,
                pullback_report: None,
                pass: false,
            })
        }
    };
    let cert = uniform_certificate(bundle.canonical_germ_groupoid().groupoid());
    verify_transport_with(&bundle, &cert, 0.0)
}

/// Same pipeline with a caller-supplied certificate on G(θ).
pub fn verify_transport_with<V: CertValue>(
    bundle: &crate::rho::RhoBundle,
    cert: &Certificate<V>,
    eq_tol: f64,
) -> Result<PipelineReport, CertError> {
    let galpha = bundle.germ_groupoid().groupoid();
    let gtheta = bundle.canonical_germ_groupoid().groupoid();
    let phi = bundle.rho_tilde();
    let is_hom = crate::groupoid::is_homomorphism(galpha, gtheta, phi);
    let d_bij = is_hom && is_d_bijective(galpha, gtheta, phi)?;
    let canonical_report = check_certificate(gtheta, cert, eq_tol)?;
    let (pullback_report, pass) = if d_bij && canonical_report.verdict {
        let pulled = pullback_certificate(galpha, gtheta, phi, cert)?;
        let report = check_certificate(galpha, &pulled, eq_tol)?;
        let pass = report.verdict;
        (Some(report), pass)
    } else {
        (None, false)
    };
    Ok(PipelineReport {
        action_valid: true,
        action_violations: Vec::new(),
        rho_tilde_is_homomorphism: is_hom,
        rho_tilde_is_d_bijective: d_bij,
        canonical_report: Some(canonical_report),
        pullback_report,
        pass,
    })
}

/// JSON schema for certificate files: arrow ids index into the
/// groupoid JSON export.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub orientation: Orientation,
    pub functions: Vec<Vec<f64>>,
    pub tolerances: Vec<f64>,
}

impl Certificate<f64> {
    pub fn from_json(j: &CertificateJson) -> Certificate<f64> {
        Certificate {
            orientation: j.orientation,
            functions: j.functions.clone(),
            tolerances: j.tolerances.clone(),
        }
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            orientation: self.orientation,
            functions: self.functions.clone(),
            tolerances: self.tolerances.clone(),
        }
    }
}

impl Certificate<Rational64> {
    pub fn to_f64(&self) -> Certificate<f64> {
        Certificate {
            orientation: self.orientation,
            functions: self
                .functions
                .iter()
                .map(|f| f.iter().map(|v| v.to_f64().expect("finite")).collect())
                .collect(),
            tolerances: self.tolerances.clone(),
        }
    }
}
