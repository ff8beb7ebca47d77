//! Matrices of linear forms, the kernel bundle presentation
//! `0 -> E_{n,a} -> O(1)^{(n+2)a} -> O(2)^{2a} -> 0`, and certificates that
//! a sampled matrix lies in the open set where both `phi` and `H^0(phi(1))`
//! are surjective.

use serde::{Deserialize, Serialize};

use crate::exactfield::{binomial, FieldSpec, Prime, SeededRng};
use crate::polyspace::mult_map;
use crate::Error;

/// Default upper end of the surjectivity search is `n + 2`.
pub fn default_t_max(n: u32) -> i64 {
    n as i64 + 2
}

pub const DEFAULT_MAX_RESAMPLE: usize = 8;

/// An `a_tgt x b_src` matrix whose entries are linear forms in `x_0..x_n`,
/// i.e. a map `O^{b_src} -> O(1)^{a_tgt}`.
///
/// Coefficients are stored flat: the coefficient of `x_k` in entry `(r, c)`
/// is `coeffs[(r * b_src + c) * (n + 1) + k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLinearFormMatrix")]
pub struct LinearFormMatrix {
    n: u32,
    a_tgt: usize,
    b_src: usize,
    field: FieldSpec,
    coeffs: Vec<u64>,
}

#[derive(Deserialize)]
struct RawLinearFormMatrix {
    n: u32,
    a_tgt: usize,
    b_src: usize,
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl TryFrom<RawLinearFormMatrix> for LinearFormMatrix {
    type Error = Error;

    fn try_from(raw: RawLinearFormMatrix) -> Result<Self, Error> {
        LinearFormMatrix::new(raw.n, raw.a_tgt, raw.b_src, raw.coeffs, raw.field)
    }
}

impl LinearFormMatrix {
    pub fn new(n: u32, a_tgt: usize, b_src: usize, coeffs: Vec<u64>, field: FieldSpec) -> Result<Self, Error> {
        let p = field
            .require_prime()
            .map_err(|_| Error::InvalidField("matrices of linear forms live over a prime field".into()))?;
        if n == 0 {
            return Err(Error::Precondition("ambient dimension must be >= 1".into()));
        }
        let expected = a_tgt * b_src * (n as usize + 1);
        if coeffs.len() != expected {
            return Err(Error::Shape(format!(
                "{a_tgt}x{b_src} matrix of linear forms on P^{n} needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&v| v >= p.get()) {
            return Err(Error::InvalidField(format!("coefficient not reduced mod {}", p.get())));
        }
        Ok(LinearFormMatrix {
            n,
            a_tgt,
            b_src,
            field,
            coeffs,
        })
    }

    pub fn zero(n: u32, a_tgt: usize, b_src: usize, field: FieldSpec) -> Result<Self, Error> {
        LinearFormMatrix::new(n, a_tgt, b_src, vec![0; a_tgt * b_src * (n as usize + 1)], field)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a_tgt(&self) -> usize {
        self.a_tgt
    }

    pub fn b_src(&self) -> usize {
        self.b_src
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn prime(&self) -> Prime {
        self.field.require_prime().expect("validated at construction")
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x_var` in entry `(row, col)`.
    #[inline]
    pub fn coeff(&self, row: usize, col: usize, var: usize) -> u64 {
        self.coeffs[(row * self.b_src + col) * (self.n as usize + 1) + var]
    }

    pub fn set_coeff(&mut self, row: usize, col: usize, var: usize, value: u64) {
        let p = self.prime();
        let idx = (row * self.b_src + col) * (self.n as usize + 1) + var;
        self.coeffs[idx] = value % p.get();
    }

    /// The transposed matrix, presenting the dual map.
    pub fn transpose(&self) -> LinearFormMatrix {
        let vars = self.n as usize + 1;
        let mut coeffs = vec![0; self.coeffs.len()];
        for r in 0..self.a_tgt {
            for c in 0..self.b_src {
                for k in 0..vars {
                    coeffs[(c * self.a_tgt + r) * vars + k] = self.coeff(r, c, k);
                }
            }
        }
        LinearFormMatrix {
            n: self.n,
            a_tgt: self.b_src,
            b_src: self.a_tgt,
            field: self.field,
            coeffs,
        }
    }

    /// Whether this is the `2a x (n+2)a` shape of the kernel bundle
    /// presentation; returns `a` if so.
    pub fn paper_shape_parameter(&self) -> Option<usize> {
        let n = self.n as usize;
        if self.a_tgt == 0 || !self.a_tgt.is_multiple_of(2) {
            return None;
        }
        let a = self.a_tgt / 2;
        (self.b_src == (n + 2) * a).then_some(a)
    }
}

/// `E_{n,a}`, presented as the kernel of `phi(1): O(1)^{(n+2)a} -> O(2)^{2a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBundlePresentation {
    pub n: u32,
    pub a: usize,
    pub phi: LinearFormMatrix,
}

impl KernelBundlePresentation {
    pub fn new(n: u32, a: usize, phi: LinearFormMatrix) -> Result<Self, Error> {
        check_bundle_parameters(n, a)?;
        if phi.n() != n || phi.a_tgt() != 2 * a || phi.b_src() != (n as usize + 2) * a {
            return Err(Error::Shape(format!(
                "E_{{{n},{a}}} needs a {}x{} matrix of linear forms on P^{n}, got {}x{} on P^{}",
                2 * a,
                (n as usize + 2) * a,
                phi.a_tgt(),
                phi.b_src(),
                phi.n()
            )));
        }
        Ok(KernelBundlePresentation { n, a, phi })
    }

    /// Rank of the presented bundle, `n * a`.
    pub fn rank(&self) -> usize {
        self.n as usize * self.a
    }

    pub fn a_tgt(&self) -> usize {
        2 * self.a
    }

    pub fn b_src(&self) -> usize {
        (self.n as usize + 2) * self.a
    }
}

pub(crate) fn check_bundle_parameters(n: u32, a: usize) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::Precondition(format!("kernel bundles need n >= 2, got n = {n}")));
    }
    if a < 1 {
        return Err(Error::Precondition("kernel bundles need a >= 1".into()));
    }
    Ok(())
}

/// Evidence that a sampled presentation is general.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityCertificate {
    /// Smallest `t` at which the cokernel of the degree-`t` piece vanishes.
    pub surjective_at_degree: Option<i64>,
    pub searched_up_to: i64,
    pub h0_phi1_iso: bool,
}

impl SurjectivityCertificate {
    pub fn is_sheaf_surjective(&self) -> bool {
        self.surjective_at_degree.is_some()
    }
}

/// The open conditions `a >= 1`, `b >= a + n`, `2b >= (n+2)a` under which a
/// general map `O^b -> O(1)^a` and its `H^0(phi(1))` are surjective.
pub fn check_generic_conditions(a_tgt: usize, b_src: usize, n: u32) -> bool {
    let n = n as usize;
    a_tgt >= 1 && b_src >= a_tgt + n && 2 * b_src >= (n + 2) * a_tgt
}

/// Every coefficient drawn independently, in storage order.
pub fn sample_phi(
    n: u32,
    a_tgt: usize,
    b_src: usize,
    rng: &mut SeededRng,
    field: FieldSpec,
) -> Result<LinearFormMatrix, Error> {
    let p = field.require_prime()?;
    let len = a_tgt * b_src * (n as usize + 1);
    let coeffs = (0..len).map(|_| rng.residue(p)).collect();
    LinearFormMatrix::new(n, a_tgt, b_src, coeffs, field)
}

fn cokernel_vanishes(phi: &LinearFormMatrix, t: i64) -> bool {
    let target = phi.a_tgt() as u64 * binomial(phi.n() as i64 + t + 1, phi.n() as i64);
    mult_map(phi, t).rank() as u64 == target
}

/// Searches `t` in `[-1, t_max]` for a degree where the graded cokernel of
/// `phi` vanishes. The cokernel module is generated in degree `-1`, so one
/// vanishing piece means every later piece vanishes and the sheaf map is
/// onto. Not finding one is inconclusive, never a proof of non-surjectivity.
pub fn sheaf_surjectivity_certificate(phi: &LinearFormMatrix, t_max: i64) -> Result<SurjectivityCertificate, Error> {
    if t_max < 1 {
        return Err(Error::Precondition(format!("t_max must be >= 1, got {t_max}")));
    }
    let surjective_at_degree = (-1..=t_max).find(|&t| cokernel_vanishes(phi, t));
    let h0_phi1_iso = match phi.paper_shape_parameter() {
        Some(_) => h0_phi1_is_isomorphism(phi)?,
        None => false,
    };
    Ok(SurjectivityCertificate {
        surjective_at_degree,
        searched_up_to: t_max,
        h0_phi1_iso,
    })
}

/// `H^0(phi(1)): H^0(O(1))^{(n+2)a} -> H^0(O(2))^{2a}` is square of size
/// `a(n+1)(n+2)`; this checks it has full rank.
pub fn h0_phi1_is_isomorphism(phi: &LinearFormMatrix) -> Result<bool, Error> {
    let a = phi.paper_shape_parameter().ok_or_else(|| {
        Error::Shape(format!(
            "{}x{} is not of the shape 2a x (n+2)a for n = {}",
            phi.a_tgt(),
            phi.b_src(),
            phi.n()
        ))
    })?;
    let m = mult_map(phi, 1);
    let side = a * (phi.n() as usize + 1) * (phi.n() as usize + 2);
    debug_assert_eq!(m.shape(), (side, side));
    Ok(m.rank() == side)
}

/// Where an accepted sample came from: replaying `attempt` draws of a
/// [`SeededRng`] seeded with `seed`, starting at `rng_counter_start`,
/// reproduces `phi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub rng_counter_start: u64,
    pub attempt: usize,
}

#[derive(Clone, Debug)]
pub struct BuiltBundle {
    pub bundle: KernelBundlePresentation,
    pub certificate: SurjectivityCertificate,
    pub sample: SampleRecord,
}

/// Samples presentations until one passes both certificates. Makes at most
/// `1 + max_resample` attempts.
pub fn build_kernel_bundle(
    n: u32,
    a: usize,
    rng: &mut SeededRng,
    field: FieldSpec,
    max_resample: usize,
) -> Result<BuiltBundle, Error> {
    check_bundle_parameters(n, a)?;
    field.require_prime()?;
    let (a_tgt, b_src) = (2 * a, (n as usize + 2) * a);
    debug_assert!(check_generic_conditions(a_tgt, b_src, n));
    for attempt in 0..=max_resample {
        let rng_counter_start = rng.counter();
        let phi = sample_phi(n, a_tgt, b_src, rng, field)?;
        let certificate = sheaf_surjectivity_certificate(&phi, default_t_max(n))?;
        if certificate.is_sheaf_surjective() && certificate.h0_phi1_iso {
            return Ok(BuiltBundle {
                bundle: KernelBundlePresentation::new(n, a, phi)?,
                certificate,
                sample: SampleRecord {
                    seed: rng.seed(),
                    rng_counter_start,
                    attempt,
                },
            });
        }
    }
    Err(Error::GenericityFailure {
        attempts: max_resample + 1,
    })
}
