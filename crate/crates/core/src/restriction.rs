//! Restriction of `E_{n,a}` to an ACM subvariety `X` of `P^n`.
//!
//! For complete intersections with explicit forms the cohomology of
//! `E = E_{n,a} | X` is computed exactly from multiplication maps on
//! `(R_X)_k`. For any ACM `X` given only by resolution degree data, the
//! vanishing of `H^i(X, E(t))` for `2 <= i <= d-1` and of `H^1(X, E(t))` for
//! `t != -1, -2` is certified by chasing the resolution of `O_X` tensored
//! with `E_{n,a}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{exceptional_h1_cells, h_line, lemma_closed_form, CohomologyTable, Provenance, TableOptions};
use crate::exactfield::{FieldSpec, SeededRng};
use crate::polyspace::{exact_forms, quotient_mult_map, HomogeneousForm, QuotientPiece, ResolutionDegreeData};
use crate::presentation::KernelBundlePresentation;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarietyMode {
    CompleteIntersection {
        degrees: Vec<u32>,
        forms: Option<Vec<HomogeneousForm>>,
    },
    DegreeData {
        res: ResolutionDegreeData,
    },
}

/// An ACM subvariety `X` of `P^n` of dimension at least two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcmVarietyDescriptor {
    n: u32,
    mode: VarietyMode,
}

impl AcmVarietyDescriptor {
    /// A complete intersection with optional explicit forms.
    pub fn complete_intersection(
        n: u32,
        degrees: Vec<u32>,
        forms: Option<Vec<HomogeneousForm>>,
    ) -> Result<Self, Error> {
        if degrees.contains(&0) {
            return Err(Error::Precondition("complete intersection degrees must be >= 1".into()));
        }
        check_dimension(n, degrees.len())?;
        if let Some(forms) = &forms {
            if forms.len() != degrees.len() {
                return Err(Error::Shape(format!(
                    "{} forms given for {} degrees",
                    forms.len(),
                    degrees.len()
                )));
            }
            for (f, &e) in forms.iter().zip(&degrees) {
                if f.n != n || f.degree != e {
                    return Err(Error::Shape(format!(
                        "form of degree {} on P^{} where degree {e} on P^{n} was declared",
                        f.degree, f.n
                    )));
                }
            }
        }
        Ok(AcmVarietyDescriptor {
            n,
            mode: VarietyMode::CompleteIntersection { degrees, forms },
        })
    }

    /// An ACM variety known only through the twists of its resolution.
    pub fn from_degree_data(res: ResolutionDegreeData) -> Result<Self, Error> {
        check_dimension(res.n, res.codim())?;
        Ok(AcmVarietyDescriptor {
            n: res.n,
            mode: VarietyMode::DegreeData { res },
        })
    }

    /// `P^n` itself.
    pub fn projective_space(n: u32) -> Result<Self, Error> {
        AcmVarietyDescriptor::complete_intersection(n, vec![], Some(vec![]))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> &VarietyMode {
        &self.mode
    }

    pub fn codim(&self) -> usize {
        match &self.mode {
            VarietyMode::CompleteIntersection { degrees, .. } => degrees.len(),
            VarietyMode::DegreeData { res } => res.codim(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n as usize - self.codim()
    }

    pub fn resolution(&self) -> ResolutionDegreeData {
        match &self.mode {
            VarietyMode::CompleteIntersection { degrees, .. } => {
                ResolutionDegreeData::koszul(self.n, degrees).expect("validated complete intersection")
            }
            VarietyMode::DegreeData { res } => res.clone(),
        }
    }

    /// Whether exact tables can be computed.
    pub fn is_exact(&self) -> bool {
        exact_forms(self).is_ok()
    }

    /// Short human-readable name, e.g. `CI(2) in P^3`.
    pub fn summary(&self) -> String {
        match &self.mode {
            VarietyMode::CompleteIntersection { degrees, .. } if degrees.is_empty() => {
                format!("P^{}", self.n)
            }
            VarietyMode::CompleteIntersection { degrees, .. } => {
                let d: Vec<String> = degrees.iter().map(u32::to_string).collect();
                format!("CI({}) in P^{}", d.join(","), self.n)
            }
            VarietyMode::DegreeData { res } => {
                format!("ACM variety of codimension {} in P^{}", res.codim(), self.n)
            }
        }
    }
}

fn check_dimension(n: u32, c: usize) -> Result<(), Error> {
    let d = n as i64 - c as i64;
    if d < 2 {
        return Err(Error::DimensionTooSmall { d });
    }
    Ok(())
}

/// A complete intersection of the given degrees; with an RNG the forms are
/// sampled (coefficients in monomial order, one form after another) so the
/// descriptor supports exact computations.
pub fn make_ci_variety(
    n: u32,
    degrees: &[u32],
    rng: Option<&mut SeededRng>,
    field: FieldSpec,
) -> Result<AcmVarietyDescriptor, Error> {
    if degrees.contains(&0) {
        return Err(Error::Precondition("complete intersection degrees must be >= 1".into()));
    }
    check_dimension(n, degrees.len())?;
    let forms = match rng {
        Some(rng) => {
            let p = field.require_prime()?;
            Some(degrees.iter().map(|&e| HomogeneousForm::random(n, e, rng, p)).collect())
        }
        None if degrees.is_empty() => Some(vec![]),
        None => None,
    };
    AcmVarietyDescriptor::complete_intersection(n, degrees.to_vec(), forms)
}

/// Why a consulted cohomology group on `P^n` vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    /// `h^i(E_{n,a}(t)) = 0` for every `t` when `2 <= i <= n-1`.
    IntermediateVanishing,
    /// `h^1(E_{n,a}(t)) = 0` for `t` outside `{-1, -2}`.
    FirstCohomologyAwayFromExceptions,
}

/// One level of the chase: `H^index(P^n, sum_j E_{n,a}(t + offset_j))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaseStep {
    /// Homological position in the resolution (0 for `F_0 = R`).
    pub level: usize,
    pub index: usize,
    pub twist_offsets: Vec<i64>,
    pub justification: Option<Justification>,
}

/// Certificate that `H^target_index(X, E(t)) = 0` for every `t` outside
/// `excluded_twists`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingChaseTrace {
    pub target_index: usize,
    pub excluded_twists: Vec<i64>,
    pub chain: Vec<ChaseStep>,
}

impl VanishingChaseTrace {
    /// Checks each cited vanishing against the closed form for every twist
    /// in `t_min..=t_max` outside the exclusions.
    pub fn confirm(&self, n: u32, a: usize, t_min: i64, t_max: i64) -> bool {
        (t_min..=t_max).filter(|t| !self.excluded_twists.contains(t)).all(|t| {
            self.chain.iter().all(|step| {
                step.justification.is_some()
                    && step
                        .twist_offsets
                        .iter()
                        .all(|&off| lemma_closed_form(n, a, step.index, t + off) == 0)
            })
        })
    }

    /// Longest homological index consulted.
    pub fn max_index(&self) -> usize {
        self.chain.iter().map(|s| s.index).max().unwrap_or(self.target_index)
    }
}

/// Cuts the tensored resolution
/// `0 -> sum E(-n_j^c) -> ... -> sum E(-n_j^1) -> E_{n,a} -> E -> 0`
/// into short exact sequences: `H^i(X, E(t))` vanishes once
/// `H^{i+k}(P^n, sum_j E_{n,a}(t - n_j^k))` does for `k = 0..c`.
/// Targets are `i = 1` (twists `-1, -2` excluded) and `2 <= i <= d-1`.
pub fn restriction_vanishing_certificate(
    x: &AcmVarietyDescriptor,
    n: u32,
    a: usize,
) -> Result<Vec<VanishingChaseTrace>, Error> {
    if x.n() != n {
        return Err(Error::Shape(format!("X sits in P^{} but E lives on P^{n}", x.n())));
    }
    crate::presentation::check_bundle_parameters(n, a)?;
    let res = x.resolution();
    let d = x.dim();
    let mut traces = Vec::new();
    for target in 1..d {
        let excluded = if target == 1 {
            exceptional_h1_cells().into_iter().map(|(_, t)| t).collect()
        } else {
            vec![]
        };
        let mut chain = Vec::with_capacity(res.codim() + 1);
        let mut failed = None;
        for level in 0..=res.codim() {
            let index = target + level;
            let twist_offsets: Vec<i64> = if level == 0 {
                vec![0]
            } else {
                res.betti[level - 1].iter().map(|&t| -(t as i64)).collect()
            };
            let justification = if (2..n as usize).contains(&index) {
                Some(Justification::IntermediateVanishing)
            } else if index == 1 && level == 0 && target == 1 {
                Some(Justification::FirstCohomologyAwayFromExceptions)
            } else {
                None
            };
            if justification.is_none() && failed.is_none() {
                failed = Some((index, twist_offsets[0]));
            }
            chain.push(ChaseStep {
                level,
                index,
                twist_offsets,
                justification,
            });
        }
        let trace = VanishingChaseTrace {
            target_index: target,
            excluded_twists: excluded,
            chain,
        };
        if let Some((index, offset)) = failed {
            return Err(Error::ChaseFailure {
                index,
                offset,
                trace: Box::new(trace),
            });
        }
        traces.push(trace);
    }
    Ok(traces)
}

/// Upper bound for `h^i(X, O_X(t))`, `i >= 1`, from the resolution chase
/// over line bundles on `P^n`. Zero for ACM `X` and `1 <= i <= d-1`.
pub fn structure_intermediate_bound(res: &ResolutionDegreeData, i: usize, t: i64) -> u64 {
    let mut total = h_line(res.n, i, t);
    for (k, twists) in res.betti.iter().enumerate() {
        for &tw in twists {
            total += h_line(res.n, i + k + 1, t - tw as i64);
        }
    }
    total
}

/// Cohomology of `O_X(t)` from resolution data: `h^0` is the Hilbert
/// function, intermediate rows are chased to zero, and the top row follows
/// from the Hilbert polynomial.
pub fn structure_sheaf_table(x: &AcmVarietyDescriptor, t_min: i64, t_max: i64) -> CohomologyTable {
    let res = x.resolution();
    let d = x.dim();
    let mut table = CohomologyTable::new(d, t_min, t_max);
    for t in t_min..=t_max {
        table.set(0, t, res.hilbert_function(t), Provenance::ClosedForm);
        for i in 1..d {
            table.set(
                i,
                t,
                structure_intermediate_bound(&res, i, t),
                Provenance::CertifiedVanishing,
            );
        }
        let top = table.top_forced_by_euler(t, res.hilbert_polynomial(t));
        let top = u64::try_from(top).expect("top cohomology of O_X is non-negative");
        table.set(d, t, top, Provenance::EulerCharacteristic);
    }
    table.symbolic_exceptions = Some(vec![]);
    table
}

/// Exact table of `E = E_{n,a} | X` for a complete intersection with
/// explicit forms:
///
/// - `h^0`, `h^1`: kernel and cokernel of `(R_X)_{1+t}^{(n+2)a} -> (R_X)_{2+t}^{2a}`
/// - `h^i`, `2 <= i <= d-1`: certified zero by the resolution chase
/// - `h^d`: from `chi(E(t)) = (n+2)a P_X(1+t) - 2a P_X(2+t)`.
///
/// A map `O_X(1)^{(n+2)a} -> O_X(2)^{2a}` is a matrix over `(R_X)_1`, a
/// quotient of `R_1`, so it always lifts to `P^n`. Sampling `phi` on `P^n`
/// therefore also samples a general map on `X`.
pub fn restricted_cohomology_table(
    kb: &KernelBundlePresentation,
    x: &AcmVarietyDescriptor,
    t_min: i64,
    t_max: i64,
) -> Result<CohomologyTable, Error> {
    restricted_cohomology_table_with(kb, x, t_min, t_max, TableOptions::default())
}

pub fn restricted_cohomology_table_with(
    kb: &KernelBundlePresentation,
    x: &AcmVarietyDescriptor,
    t_min: i64,
    t_max: i64,
    options: TableOptions,
) -> Result<CohomologyTable, Error> {
    let forms = exact_forms(x)?;
    restriction_vanishing_certificate(x, kb.n, kb.a)?;
    let res = x.resolution();
    let d = x.dim();
    let p = kb.phi.prime();
    let (a_tgt, b_src) = (kb.a_tgt() as u64, kb.b_src() as u64);

    let pieces: BTreeMap<i64, QuotientPiece> = if t_max < t_min {
        BTreeMap::new()
    } else {
        (1 + t_min..=2 + t_max)
            .into_par_iter()
            .map(|k| (k, QuotientPiece::new(x.n(), k, forms, p)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    };
    let low_rows: Vec<(u64, u64)> = (t_min..=t_max)
        .into_par_iter()
        .map(|t| {
            let m = quotient_mult_map(&kb.phi, &pieces[&(1 + t)], &pieces[&(2 + t)]);
            let r = m.rank() as u64;
            (m.cols() as u64 - r, m.rows() as u64 - r)
        })
        .collect();

    let mut table = CohomologyTable::new(d, t_min, t_max);
    for (t, &(h0, h1)) in (t_min..=t_max).zip(&low_rows) {
        table.set(0, t, h0, Provenance::ExactRank);
        table.set(1, t, h1, Provenance::ExactRank);
        for i in 2..d {
            if options.audit {
                let bound = a_tgt * structure_intermediate_bound(&res, i - 1, 2 + t)
                    + b_src * structure_intermediate_bound(&res, i, 1 + t);
                table.set(i, t, bound, Provenance::ExactRank);
            } else {
                table.set(i, t, 0, Provenance::CertifiedVanishing);
            }
        }
        let chi = b_src as i64 * res.hilbert_polynomial(1 + t) - a_tgt as i64 * res.hilbert_polynomial(2 + t);
        let top = table.top_forced_by_euler(t, chi);
        let top = u64::try_from(top).expect("top cohomology of the restriction is non-negative");
        table.set(d, t, top, Provenance::EulerCharacteristic);
    }
    table.symbolic_exceptions = Some(exceptional_h1_cells());
    Ok(table)
}

/// A nonzero intermediate cell `h^index(X, E(s * t))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcmWitness {
    pub index: usize,
    /// Twist by `O_X(1)`, i.e. `s * t`.
    pub twist: i64,
    /// Twist by `O_X(s)`.
    pub t: i64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum AcmVerdict {
    Acm,
    /// Witnesses in decreasing twist order.
    NotAcm {
        witnesses: Vec<AcmWitness>,
    },
    /// Cells needed for a verdict that the table does not cover. With
    /// `unbounded` no symbolic certificate is attached, so no finite window
    /// can settle the question.
    Inconclusive {
        missing: Vec<(usize, i64)>,
        unbounded: bool,
    },
}

impl AcmVerdict {
    pub fn is_acm(&self) -> bool {
        matches!(self, AcmVerdict::Acm)
    }
}

/// Whether `H^i(X, E(s t)) = 0` for all `1 <= i <= d-1` and all `t`, using
/// the window for computed cells and the table's symbolic exceptions for the
/// rest.
pub fn acm_with_respect_to_s(table: &CohomologyTable, s: u32, d: usize) -> Result<AcmVerdict, Error> {
    if s < 1 {
        return Err(Error::Precondition("s must be >= 1".into()));
    }
    if d > table.dim {
        return Err(Error::Shape(format!("table has rows up to {} but d = {d}", table.dim)));
    }
    let s = s as i64;
    let mut witnesses = Vec::new();
    let lo = table.t_min.div_euclid(s) + i64::from(table.t_min.rem_euclid(s) != 0);
    let hi = table.t_max.div_euclid(s);
    for t in (lo..=hi).rev() {
        for i in 1..d {
            let value = table.get(i, s * t).expect("multiple of s inside window");
            if value != 0 {
                witnesses.push(AcmWitness {
                    index: i,
                    twist: s * t,
                    t,
                    value,
                });
            }
        }
    }
    if !witnesses.is_empty() {
        return Ok(AcmVerdict::NotAcm { witnesses });
    }
    match &table.symbolic_exceptions {
        None => Ok(AcmVerdict::Inconclusive {
            missing: vec![],
            unbounded: true,
        }),
        Some(exceptions) => {
            let missing: Vec<(usize, i64)> = exceptions
                .iter()
                .copied()
                .filter(|&(i, t)| (1..d).contains(&i) && t.rem_euclid(s) == 0 && !table.contains(t))
                .collect();
            if missing.is_empty() {
                Ok(AcmVerdict::Acm)
            } else {
                Ok(AcmVerdict::Inconclusive {
                    missing,
                    unbounded: false,
                })
            }
        }
    }
}

/// An empty-window table carrying only the symbolic exceptions of a
/// vanishing certificate; enough to decide ACM-ness for degree-data
/// varieties.
pub fn symbolic_table(x: &AcmVarietyDescriptor) -> CohomologyTable {
    let mut table = CohomologyTable::new(x.dim(), 1, 0);
    table.symbolic_exceptions = Some(exceptional_h1_cells());
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology_table_exact, default_window};
    use crate::exactfield::SeededRng;
    use crate::polyspace::mult_map_on_x;
    use crate::presentation::build_kernel_bundle;

    fn f() -> FieldSpec {
        FieldSpec::default_prime()
    }

    #[test]
    fn ci_descriptors() {
        let q = make_ci_variety(3, &[2], None, f()).unwrap();
        assert_eq!(q.resolution().betti, vec![vec![2]]);
        assert_eq!(q.dim(), 2);
        assert!(!q.is_exact());
        let s = make_ci_variety(4, &[2, 3], None, f()).unwrap();
        assert_eq!(s.resolution().betti, vec![vec![2, 3], vec![5]]);
        assert_eq!(s.dim(), 2);
        assert!(matches!(
            make_ci_variety(3, &[2, 2], None, f()),
            Err(Error::DimensionTooSmall { d: 1 })
        ));
        let exact = make_ci_variety(3, &[2], Some(&mut SeededRng::new(1)), f()).unwrap();
        assert!(exact.is_exact());
        assert!(AcmVarietyDescriptor::projective_space(3).unwrap().is_exact());
    }

    #[test]
    fn quadric_surface_chase() {
        let q = make_ci_variety(3, &[2], None, f()).unwrap();
        let traces = restriction_vanishing_certificate(&q, 3, 1).unwrap();
        assert_eq!(traces.len(), 1);
        let tr = &traces[0];
        assert_eq!(tr.target_index, 1);
        assert_eq!(tr.excluded_twists, vec![-2, -1]);
        assert_eq!(tr.chain.len(), 2);
        assert_eq!((tr.chain[0].index, tr.chain[0].twist_offsets.clone()), (1, vec![0]));
        assert_eq!((tr.chain[1].index, tr.chain[1].twist_offsets.clone()), (2, vec![-2]));
        assert!(tr.confirm(3, 1, -20, 20));
    }

    #[test]
    fn projective_space_chase_uses_closed_form() {
        let x = AcmVarietyDescriptor::projective_space(4).unwrap();
        let traces = restriction_vanishing_certificate(&x, 4, 2).unwrap();
        assert_eq!(traces.len(), 3);
        for tr in &traces {
            assert_eq!(tr.chain.len(), 1);
            assert!(tr.confirm(4, 2, -20, 20));
        }
    }

    #[test]
    fn codimension_two_chain_length() {
        let x = make_ci_variety(4, &[2, 2], None, f()).unwrap();
        let traces = restriction_vanishing_certificate(&x, 4, 1).unwrap();
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0].chain.len(), 3);
        assert_eq!(traces[0].max_index(), 3);
    }

    #[test]
    fn degree_data_chase() {
        // a codimension-two ACM threefold in P^5 from a Hilbert-Burch resolution
        let res = ResolutionDegreeData::new(5, vec![vec![2, 2, 2], vec![3, 3]]).unwrap();
        let x = AcmVarietyDescriptor::from_degree_data(res).unwrap();
        assert_eq!(x.dim(), 3);
        let traces = restriction_vanishing_certificate(&x, 5, 1).unwrap();
        assert_eq!(traces.len(), 2);
        assert!(traces.iter().all(|t| t.confirm(5, 1, -15, 15)));
        let table = symbolic_table(&x);
        assert!(acm_with_respect_to_s(&table, 3, 3).unwrap().is_acm());
    }

    #[test]
    fn mult_map_on_projective_space_is_mult_map() {
        let built = build_kernel_bundle(2, 1, &mut SeededRng::new(3), f(), 8).unwrap();
        let x = AcmVarietyDescriptor::projective_space(2).unwrap();
        for m in -2..4 {
            assert_eq!(
                mult_map_on_x(&built.bundle.phi, m, &x).unwrap(),
                crate::polyspace::mult_map(&built.bundle.phi, m)
            );
        }
    }

    #[test]
    fn mult_map_on_quadric_shape() {
        let mut rng = SeededRng::new(4);
        let x = make_ci_variety(3, &[2], Some(&mut rng), f()).unwrap();
        let built = build_kernel_bundle(3, 1, &mut rng, f(), 8).unwrap();
        let m = mult_map_on_x(&built.bundle.phi, 1, &x).unwrap();
        assert_eq!(m.shape(), (2 * 9, 5 * 4));
        assert_eq!(mult_map_on_x(&built.bundle.phi, -1, &x).unwrap().cols(), 0);
        let data_only = make_ci_variety(3, &[2], None, f()).unwrap();
        assert!(matches!(
            mult_map_on_x(&built.bundle.phi, 1, &data_only),
            Err(Error::ExactModeUnavailable)
        ));
    }

    #[test]
    fn restriction_to_projective_space_is_exact_table() {
        let built = build_kernel_bundle(3, 1, &mut SeededRng::new(8), f(), 8).unwrap();
        let x = AcmVarietyDescriptor::projective_space(3).unwrap();
        let (lo, hi) = default_window(3);
        let r = restricted_cohomology_table(&built.bundle, &x, lo, hi).unwrap();
        let e = cohomology_table_exact(&built.bundle, lo, hi);
        assert_eq!(r.cells, e.cells);
    }

    #[test]
    fn quadric_surface_restriction() {
        let mut rng = SeededRng::new(42);
        let x = make_ci_variety(3, &[2], Some(&mut rng), f()).unwrap();
        let built = build_kernel_bundle(3, 1, &mut rng, f(), 8).unwrap();
        let table = restricted_cohomology_table(&built.bundle, &x, -6, 4).unwrap();
        for t in -6..=4 {
            if t != -1 && t != -2 {
                assert_eq!(table.get(1, t), Some(0), "t = {t}");
            }
            if t <= -1 {
                assert_eq!(table.get(0, t), Some(0), "t = {t}");
            }
        }
        // 20 sections of O_X(1)^5 onto the 18 of O_X(2)^2; the kernel is the
        // image of H^1(E(-2)) = 2.
        assert_eq!(table.get(0, 0), Some(2));
        for s in [3, 4, 5] {
            assert!(acm_with_respect_to_s(&table, s, 2).unwrap().is_acm());
        }
    }

    #[test]
    fn degree_data_rejected_for_exact_table() {
        let built = build_kernel_bundle(3, 1, &mut SeededRng::new(8), f(), 8).unwrap();
        let x = make_ci_variety(3, &[2], None, f()).unwrap();
        assert!(matches!(
            restricted_cohomology_table(&built.bundle, &x, -1, 1),
            Err(Error::ExactModeUnavailable)
        ));
    }

    #[test]
    fn structure_sheaf_is_acm() {
        for (n, degrees) in [(3, vec![2]), (3, vec![3]), (4, vec![2]), (5, vec![2, 3])] {
            let x = make_ci_variety(n, &degrees, None, f()).unwrap();
            let table = structure_sheaf_table(&x, -10, 6);
            for t in -10..=6 {
                for i in 1..x.dim() {
                    assert_eq!(table.get(i, t), Some(0));
                }
            }
        }
    }

    #[test]
    fn acm_verdicts_on_p2() {
        let built = build_kernel_bundle(2, 1, &mut SeededRng::new(1), f(), 8).unwrap();
        let x = AcmVarietyDescriptor::projective_space(2).unwrap();
        let table = restricted_cohomology_table(&built.bundle, &x, -6, 4).unwrap();
        match acm_with_respect_to_s(&table, 1, 2).unwrap() {
            AcmVerdict::NotAcm { witnesses } => {
                assert_eq!((witnesses[0].index, witnesses[0].twist, witnesses[0].value), (1, -1, 2));
            }
            v => panic!("unexpected {v:?}"),
        }
        match acm_with_respect_to_s(&table, 2, 2).unwrap() {
            AcmVerdict::NotAcm { witnesses } => {
                assert_eq!(witnesses.len(), 1);
                assert_eq!((witnesses[0].twist, witnesses[0].t, witnesses[0].value), (-2, -1, 2));
            }
            v => panic!("unexpected {v:?}"),
        }
        assert!(acm_with_respect_to_s(&table, 3, 2).unwrap().is_acm());
    }

    #[test]
    fn small_window_is_inconclusive() {
        let built = build_kernel_bundle(2, 1, &mut SeededRng::new(1), f(), 8).unwrap();
        let x = AcmVarietyDescriptor::projective_space(2).unwrap();
        let table = restricted_cohomology_table(&built.bundle, &x, 0, 3).unwrap();
        assert_eq!(
            acm_with_respect_to_s(&table, 1, 2).unwrap(),
            AcmVerdict::Inconclusive {
                missing: vec![(1, -2), (1, -1)],
                unbounded: false
            }
        );
        let mut bare = table.clone();
        bare.symbolic_exceptions = None;
        assert!(matches!(
            acm_with_respect_to_s(&bare, 3, 2).unwrap(),
            AcmVerdict::Inconclusive { unbounded: true, .. }
        ));
    }

    #[test]
    fn enlarging_window_keeps_verdict() {
        let mut rng = SeededRng::new(6);
        let x = make_ci_variety(3, &[2], Some(&mut rng), f()).unwrap();
        let built = build_kernel_bundle(3, 1, &mut rng, f(), 8).unwrap();
        for (lo, hi) in [(0, 1), (-3, 2), (-7, 5)] {
            let table = restricted_cohomology_table(&built.bundle, &x, lo, hi).unwrap();
            assert!(acm_with_respect_to_s(&table, 3, 2).unwrap().is_acm(), "[{lo}, {hi}]");
        }
    }
}
