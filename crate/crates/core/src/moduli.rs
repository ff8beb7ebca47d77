//! Simplicity, family dimension and the wildness certificate.
//!
//! A general `E` in the family is simple exactly when the stabilizer of the
//! dual presentation matrix `A` under `(g1, g2) . A = g1^{-1} A g2` is the
//! one-dimensional group of scalars. Its Lie algebra is the space of pairs
//! `(B, C)` with `A C = B A`, which is a finite linear system.

use serde::{Deserialize, Serialize};

use crate::cohomology::{default_window, CohomologyTable};
use crate::exactfield::{binomial, DenseMatrix, FieldSpec, SeededRng};
use crate::presentation::{
    build_kernel_bundle, check_bundle_parameters, check_generic_conditions, LinearFormMatrix, SampleRecord,
    SurjectivityCertificate, DEFAULT_MAX_RESAMPLE,
};
use crate::restriction::{
    acm_with_respect_to_s, restricted_cohomology_table, restriction_vanishing_certificate, symbolic_table,
    AcmVarietyDescriptor, AcmVerdict, VanishingChaseTrace,
};
use crate::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `(2a)^2 + ((n+2)a)^2 - 2a (n+1)(n+2) a`: the Tits form of the Kronecker
/// quiver with `n+1` arrows at dimension vector `(2a, (n+2)a)`.
pub fn kac_discriminant(n: u32, a: usize) -> i64 {
    let (n, a) = (n as i64, a as i64);
    (2 * a).pow(2) + ((n + 2) * a).pow(2) - 2 * a * (n + 1) * (n + 2) * a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub stab_dimension: usize,
    pub kac_value: i64,
    pub simple: bool,
    pub equations: usize,
    pub unknowns: usize,
}

/// The intertwiner system `A C = B A` for `A` of shape `(n+2)a x 2a`.
///
/// Unknowns are `B` (row-major, `(n+2)a x (n+2)a`) followed by `C`
/// (row-major, `2a x 2a`). Each entry of `A C - B A` is a linear form; one
/// equation per entry and per variable.
pub fn intertwiner_system(dual: &LinearFormMatrix) -> Result<DenseMatrix, Error> {
    let (rows, cols) = (dual.a_tgt(), dual.b_src());
    let n = dual.n() as usize;
    if cols == 0 || cols % 2 != 0 || rows != (n + 2) * (cols / 2) {
        return Err(Error::Shape(format!(
            "dual presentation must be (n+2)a x 2a, got {rows}x{cols} on P^{n}"
        )));
    }
    let p = dual.prime();
    let unknowns = rows * rows + cols * cols;
    let equations = (n + 1) * rows * cols;
    let mut m = DenseMatrix::zeros(equations, unknowns, FieldSpec::Prime(p));
    let b_var = |r: usize, v: usize| r * rows + v;
    let c_var = |u: usize, s: usize| rows * rows + u * cols + s;
    for k in 0..=n {
        for r in 0..rows {
            for s in 0..cols {
                let eq = (k * rows + r) * cols + s;
                for u in 0..cols {
                    let coef = dual.coeff(r, u, k);
                    if coef != 0 {
                        m.add_residue(eq, c_var(u, s), coef);
                    }
                }
                for v in 0..rows {
                    let coef = dual.coeff(v, s, k);
                    if coef != 0 {
                        m.add_residue(eq, b_var(r, v), p.neg(coef));
                    }
                }
            }
        }
    }
    Ok(m)
}

/// The vector encoding `(B, C) = (I, I)`.
pub fn scalar_pair(dual: &LinearFormMatrix) -> DenseMatrix {
    let (rows, cols) = (dual.a_tgt(), dual.b_src());
    let mut v = DenseMatrix::zeros(rows * rows + cols * cols, 1, dual.field());
    for r in 0..rows {
        v.set_i64(r * rows + r, 0, 1);
    }
    for u in 0..cols {
        v.set_i64(rows * rows + u * cols + u, 0, 1);
    }
    v
}

/// Dimension of the stabilizer of the dual presentation `A`.
pub fn stabilizer_dimension(dual: &LinearFormMatrix) -> Result<StabilizerReport, Error> {
    let system = intertwiner_system(dual)?;
    let a = dual.b_src() / 2;
    let stab_dimension = system.nullity();
    debug_assert!(stab_dimension >= 1);
    Ok(StabilizerReport {
        stab_dimension,
        kac_value: kac_discriminant(dual.n(), a),
        simple: stab_dimension == 1,
        equations: system.rows(),
        unknowns: system.cols(),
    })
}

/// `a^2 (n^2 + 2n - 4) + 1`, checked against the orbit count
/// `dim M - dim GL((n+2)a) - dim GL(2a) + 1`.
pub fn family_dimension(n: u32, a: usize) -> u64 {
    let (n64, a64) = (n as u64, a as u64);
    let closed = a64 * a64 * (n64 * n64 + 2 * n64 - 4) + 1;
    assert_eq!(closed, family_dimension_by_orbit_count(n, a));
    closed
}

pub fn family_dimension_by_orbit_count(n: u32, a: usize) -> u64 {
    let (n, a) = (n as u64, a as u64);
    let hom = (n + 1) * (2 * a) * ((n + 2) * a);
    let aut = ((n + 2) * a).pow(2) + (2 * a).pow(2);
    hom - aut + 1
}

/// `C(n+3, 3) - 1`, the dimension of the target of the 3-uple Veronese map.
pub fn veronese_bound(n: u32) -> u64 {
    binomial(n as i64 + 3, 3) - 1
}

/// `h^0(O_X(s)) - 1`.
pub fn embedding_dimension(x: &AcmVarietyDescriptor, s: u32) -> u64 {
    x.resolution().hilbert_function(s as i64) - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildnessChecks {
    pub genericity: bool,
    pub h0_iso: bool,
    pub simplicity: bool,
    pub vanishing_certificate: bool,
    pub acm_wrt_s: bool,
}

impl WildnessChecks {
    pub fn all(&self) -> bool {
        self.genericity && self.h0_iso && self.simplicity && self.vanishing_certificate && self.acm_wrt_s
    }
}

/// Everything needed to re-verify that `O_X(s)` embeds `X` with a family of
/// simple ACM bundles of rank `na` and dimension `a^2 (n^2 + 2n - 4) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildnessReport {
    pub tool_version: String,
    pub prime: u64,
    pub seed: u64,
    pub n: u32,
    pub a: usize,
    pub s: u32,
    pub variety_summary: String,
    pub variety_dim: usize,
    pub variety: AcmVarietyDescriptor,
    pub rank: usize,
    pub family_dimension: u64,
    pub veronese_bound: u64,
    pub ambient_dim_for_s: u64,
    pub checks: WildnessChecks,
    pub verdict: bool,
    pub sample: SampleRecord,
    pub presentation: LinearFormMatrix,
    pub surjectivity: SurjectivityCertificate,
    pub stabilizer: StabilizerReport,
    pub vanishing: Vec<VanishingChaseTrace>,
    pub acm: AcmVerdict,
    pub restricted_table: Option<CohomologyTable>,
}

/// Runs the whole pipeline for one `a`: sample a general presentation,
/// certify it, decide simplicity, certify the vanishing pattern on `X`,
/// compute the exact restricted table when `X` carries forms, and decide
/// ACM-ness with respect to `O_X(s)`.
pub fn wildness_certificate(
    x: &AcmVarietyDescriptor,
    s: u32,
    a: usize,
    rng: &mut SeededRng,
    field: FieldSpec,
) -> Result<WildnessReport, Error> {
    if s < 3 {
        return Err(Error::TwistTooSmall { s });
    }
    let n = x.n();
    check_bundle_parameters(n, a)?;
    let p = field.require_prime()?;
    let built = build_kernel_bundle(n, a, rng, field, DEFAULT_MAX_RESAMPLE)?;
    let kb = &built.bundle;

    let genericity = check_generic_conditions(kb.a_tgt(), kb.b_src(), n) && built.certificate.is_sheaf_surjective();
    let stabilizer = stabilizer_dimension(&kb.phi.transpose())?;
    let vanishing = restriction_vanishing_certificate(x, n, a)?;
    let (lo, hi) = default_window(n);
    let chase_ok = vanishing
        .iter()
        .all(|tr| tr.confirm(n, a, lo - 2 * (n as i64) - 8, hi + 8));

    let restricted_table = if x.is_exact() {
        Some(restricted_cohomology_table(kb, x, lo, hi)?)
    } else {
        None
    };
    let exact_agrees = restricted_table.as_ref().is_none_or(|table| {
        table.twists().all(|t| {
            (1..x.dim()).all(|i| {
                let excluded = i == 1 && (t == -1 || t == -2);
                excluded || table.get(i, t) == Some(0)
            })
        })
    });
    let acm = match &restricted_table {
        Some(table) => acm_with_respect_to_s(table, s, x.dim())?,
        None => acm_with_respect_to_s(&symbolic_table(x), s, x.dim())?,
    };

    let checks = WildnessChecks {
        genericity,
        h0_iso: built.certificate.h0_phi1_iso,
        simplicity: stabilizer.simple,
        vanishing_certificate: chase_ok && exact_agrees,
        acm_wrt_s: acm.is_acm(),
    };
    let verdict = checks.all() && s >= 3 && x.dim() >= 2;
    Ok(WildnessReport {
        tool_version: TOOL_VERSION.to_string(),
        prime: p.get(),
        seed: rng.seed(),
        n,
        a,
        s,
        variety_summary: x.summary(),
        variety_dim: x.dim(),
        variety: x.clone(),
        rank: kb.rank(),
        family_dimension: family_dimension(n, a),
        veronese_bound: veronese_bound(n),
        ambient_dim_for_s: embedding_dimension(x, s),
        checks,
        verdict,
        sample: built.sample.clone(),
        presentation: kb.phi.clone(),
        surjectivity: built.certificate.clone(),
        stabilizer,
        vanishing,
        acm,
        restricted_table,
    })
}
