//! Exact scalars and dense matrices over a prime field or the rationals, and
//! the seeded random source used to pick "general" elements.
//!
//! Everything downstream reduces to ranks and kernels of dense matrices, so
//! this module is the only place elimination happens. Matrices are reduced to
//! the (unique) reduced row-echelon form, which makes kernel bases canonical.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

/// Default characteristic for all sampling-based computations.
pub const DEFAULT_PRIME: u64 = 32003;

/// Smallest prime accepted for a [`FieldSpec`]. Generic-rank arguments fail
/// too often over smaller fields.
pub const MIN_PRIME: u64 = 101;

/// A validated prime `p` with `MIN_PRIME <= p < 2^31`, so that products of two
/// reduced residues fit comfortably in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p < MIN_PRIME {
            return Err(Error::InvalidField(format!(
                "prime {p} is below the minimum {MIN_PRIME}"
            )));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("prime {p} does not fit in 31 bits")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse by Fermat. Panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero");
        let mut base = a % self.0;
        let mut exp = self.0 - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Canonical residue of a signed integer.
    pub fn reduce(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn lift(self, a: u64) -> i64 {
        if a > self.0 / 2 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self, Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSpec {
    Prime(Prime),
    Rationals,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, Error> {
        Prime::new(p).map(FieldSpec::Prime)
    }

    pub fn default_prime() -> Self {
        FieldSpec::Prime(Prime(DEFAULT_PRIME))
    }

    /// The underlying prime, or an error for the rationals.
    pub fn require_prime(self) -> Result<Prime, Error> {
        match self {
            FieldSpec::Prime(p) => Ok(p),
            FieldSpec::Rationals => Err(Error::UnsupportedSampling),
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::default_prime()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{}", p.get()),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

/// A single field element, tagged by its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Prime(u64),
    Rational(BigRational),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Prime(v) => *v == 0,
            FieldElement::Rational(q) => q.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entries {
    Prime { p: Prime, data: Vec<u64> },
    Rational(Vec<BigRational>),
}

/// A dense row-major matrix over a [`FieldSpec`]. Entries are always stored in
/// canonical form (`0 <= e < p`, or normalized fractions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        let entries = match field {
            FieldSpec::Prime(p) => Entries::Prime {
                p,
                data: vec![0; rows * cols],
            },
            FieldSpec::Rationals => Entries::Rational(vec![BigRational::zero(); rows * cols]),
        };
        DenseMatrix { rows, cols, entries }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = DenseMatrix::zeros(n, n, field);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integers, reducing mod `p` for prime fields.
    pub fn from_i64(rows: usize, cols: usize, values: &[i64], field: FieldSpec) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count must be rows * cols");
        let entries = match field {
            FieldSpec::Prime(p) => Entries::Prime {
                p,
                data: values.iter().map(|&v| p.reduce(v)).collect(),
            },
            FieldSpec::Rationals => Entries::Rational(
                values
                    .iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v)))
                    .collect(),
            ),
        };
        DenseMatrix { rows, cols, entries }
    }

    /// Wraps already-reduced residues.
    pub fn from_residues(rows: usize, cols: usize, p: Prime, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        debug_assert!(data.iter().all(|&v| v < p.get()));
        DenseMatrix {
            rows,
            cols,
            entries: Entries::Prime { p, data },
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> FieldSpec {
        match &self.entries {
            Entries::Prime { p, .. } => FieldSpec::Prime(*p),
            Entries::Rational(_) => FieldSpec::Rationals,
        }
    }

    /// Row-major residues of a prime-field matrix.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.entries {
            Entries::Prime { data, .. } => Some(data),
            Entries::Rational(_) => None,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.rows && j < self.cols);
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Prime { data, .. } => FieldElement::Prime(data[k]),
            Entries::Rational(data) => FieldElement::Rational(data[k].clone()),
        }
    }

    pub fn set_i64(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols);
        let k = i * self.cols + j;
        match &mut self.entries {
            Entries::Prime { p, data } => data[k] = p.reduce(v),
            Entries::Rational(data) => data[k] = BigRational::from_integer(BigInt::from(v)),
        }
    }

    /// Adds a residue into a prime-field entry.
    #[inline]
    pub fn add_residue(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        let k = i * self.cols + j;
        match &mut self.entries {
            Entries::Prime { p, data } => data[k] = p.add(data[k], v % p.get()),
            Entries::Rational(_) => panic!("add_residue on a rational matrix"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Prime { data, .. } => data.iter().all(|&v| v == 0),
            Entries::Rational(data) => data.iter().all(Zero::is_zero),
        }
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Prime { p, data } => Entries::Prime {
                p: *p,
                data: (0..c * r).map(|k| data[(k % r) * c + k / r]).collect(),
            },
            Entries::Rational(data) => {
                Entries::Rational((0..c * r).map(|k| data[(k % r) * c + k / r].clone()).collect())
            }
        };
        DenseMatrix {
            rows: c,
            cols: r,
            entries,
        }
    }

    /// Matrix product. Panics on shape or field mismatch.
    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let (n, m, k) = (self.rows, other.cols, self.cols);
        match (&self.entries, &other.entries) {
            (Entries::Prime { p, data: a }, Entries::Prime { p: q, data: b }) => {
                assert_eq!(p, q, "field mismatch");
                let mut out = vec![0u64; n * m];
                for i in 0..n {
                    for l in 0..k {
                        let x = a[i * k + l];
                        if x == 0 {
                            continue;
                        }
                        for j in 0..m {
                            out[i * m + j] = (out[i * m + j] + x * b[l * m + j]) % p.get();
                        }
                    }
                }
                DenseMatrix::from_residues(n, m, *p, out)
            }
            (Entries::Rational(a), Entries::Rational(b)) => {
                let mut out = vec![BigRational::zero(); n * m];
                for i in 0..n {
                    for l in 0..k {
                        if a[i * k + l].is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            out[i * m + j] += &a[i * k + l] * &b[l * m + j];
                        }
                    }
                }
                DenseMatrix {
                    rows: n,
                    cols: m,
                    entries: Entries::Rational(out),
                }
            }
            _ => panic!("field mismatch"),
        }
    }

    /// Rank over the field.
    pub fn rank(&self) -> usize {
        self.echelon(false).pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Reduced row-echelon form (pivot rows first, zero rows dropped) together
    /// with the pivot columns.
    pub fn rref(&self) -> Echelon {
        self.echelon(true)
    }

    /// Columns form a basis of the right null space: for each free column `f`
    /// of the RREF, the vector with `1` at `f` and minus the pivot-row entries
    /// at the pivot columns.
    pub fn kernel_basis(&self) -> DenseMatrix {
        let ech = self.rref();
        let free: Vec<usize> = {
            let mut is_pivot = vec![false; self.cols];
            for &c in &ech.pivots {
                is_pivot[c] = true;
            }
            (0..self.cols).filter(|&c| !is_pivot[c]).collect()
        };
        let nullity = free.len();
        let mut out = DenseMatrix::zeros(self.cols, nullity, self.field());
        let r = &ech.matrix;
        for (k, &f) in free.iter().enumerate() {
            match (&mut out.entries, &r.entries) {
                (Entries::Prime { p, data }, Entries::Prime { data: rd, .. }) => {
                    data[f * nullity + k] = 1;
                    for (row, &pc) in ech.pivots.iter().enumerate() {
                        data[pc * nullity + k] = p.neg(rd[row * self.cols + f]);
                    }
                }
                (Entries::Rational(data), Entries::Rational(rd)) => {
                    data[f * nullity + k] = BigRational::one();
                    for (row, &pc) in ech.pivots.iter().enumerate() {
                        data[pc * nullity + k] = -rd[row * self.cols + f].clone();
                    }
                }
                _ => unreachable!(),
            }
        }
        out
    }

    fn echelon(&self, reduced: bool) -> Echelon {
        match &self.entries {
            Entries::Prime { p, data } => {
                let mut work = data.clone();
                let pivots = eliminate(&PrimeArith(*p), self.rows, self.cols, &mut work, reduced);
                work.truncate(pivots.len() * self.cols);
                Echelon {
                    matrix: DenseMatrix::from_residues(pivots.len(), self.cols, *p, work),
                    pivots,
                }
            }
            Entries::Rational(data) => {
                let mut work = data.clone();
                let pivots = eliminate(&RationalArith, self.rows, self.cols, &mut work, reduced);
                work.truncate(pivots.len() * self.cols);
                Echelon {
                    matrix: DenseMatrix {
                        rows: pivots.len(),
                        cols: self.cols,
                        entries: Entries::Rational(work),
                    },
                    pivots,
                }
            }
        }
    }
}

/// Result of row reduction: the nonzero rows and their pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
}

trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - f * b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
}

struct PrimeArith(Prime);

impl Arith for PrimeArith {
    type E = u64;

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn inv(&self, a: &u64) -> u64 {
        self.0.inv(*a)
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.0.mul(*a, *b)
    }

    #[inline]
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        let p = self.0.get();
        (a + p * p - f * b) % p
    }
}

struct RationalArith;

impl Arith for RationalArith {
    type E = BigRational;

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
}

/// Gauss-Jordan elimination in place. Pivots are searched column by column,
/// taking the first nonzero row; pivot rows are normalized to a leading one.
/// With `reduced` the entries above each pivot are cleared too, giving the
/// unique RREF. Returns the pivot columns; the first `pivots.len()` rows of
/// `data` hold the echelon rows afterwards.
fn eliminate<A: Arith>(ar: &A, rows: usize, cols: usize, data: &mut [A::E], reduced: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| !ar.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if sel != r {
            for j in c..cols {
                data.swap(sel * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&data[r * cols + c]);
        for j in c..cols {
            data[r * cols + j] = ar.mul(&data[r * cols + j], &inv);
        }
        let (head, tail) = data.split_at_mut(r * cols);
        let (pivot_row, below) = tail.split_at_mut(cols);
        let clear = |row: &mut [A::E]| {
            let f = row[c].clone();
            if ar.is_zero(&f) {
                return;
            }
            for j in c..cols {
                row[j] = ar.sub_mul(&row[j], &f, &pivot_row[j]);
            }
        };
        below.chunks_mut(cols).for_each(clear);
        if reduced {
            head.chunks_mut(cols).for_each(clear);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Deterministic counter-based generator: SplitMix64.
///
/// The `k`-th output (`k = counter` after the increment) is
/// `mix(seed + k * 0x9E3779B97F4A7C15)` with the SplitMix64 finalizer
/// (shifts 30/27/31, multipliers `0xBF58476D1CE4E5B9` and
/// `0x94D049BB133111EB`). The stream depends only on `(seed, counter)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededRng {
    seed: u64,
    counter: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { seed, counter: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let mut z = self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// A residue in `[0, p)` from exactly one 64-bit draw, via the high word
    /// of `draw * p`. Advances the counter by one. The deviation from uniform
    /// is below `p / 2^64`.
    pub fn random_field_element(&mut self, field: FieldSpec) -> Result<u64, Error> {
        let p = field.require_prime()?;
        Ok(self.residue(p))
    }

    pub fn residue(&mut self, p: Prime) -> u64 {
        ((self.next_u64() as u128 * p.get() as u128) >> 64) as u64
    }
}

/// Exact binomial coefficient `C(m, k)`, zero when `m < k` or either is negative.
pub fn binomial(m: i64, k: i64) -> u64 {
    if k < 0 || m < k {
        return 0;
    }
    let k = k.min(m - k) as u128;
    let m = m as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) / (i + 1);
    }
    acc.to_u64().expect("binomial coefficient overflows u64")
}

/// `C(n + k, n)` extended to all integers `k` as the polynomial
/// `(k+1)(k+2)...(k+n) / n!`: the Euler characteristic of `O(k)` on `P^n`.
pub fn binomial_poly(n: u32, k: i64) -> i64 {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=n as i64 {
        num *= BigInt::from(k + i);
        den *= BigInt::from(i);
    }
    let q = num / den;
    debug_assert!(q.abs() < BigInt::from(i64::MAX));
    q.to_i64().expect("Euler characteristic overflows i64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> FieldSpec {
        FieldSpec::default_prime()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(DenseMatrix::identity(3, fp()).rank(), 3);
    }

    #[test]
    fn zero_rank() {
        assert_eq!(DenseMatrix::zeros(4, 7, fp()).rank(), 0);
    }

    #[test]
    fn proportional_rows_over_rationals() {
        let m = DenseMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6], FieldSpec::Rationals);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let k = DenseMatrix::zeros(2, 2, fp()).kernel_basis();
        assert_eq!(k.shape(), (2, 2));
        assert_eq!(k.rank(), 2);
        let k = DenseMatrix::identity(5, fp()).kernel_basis();
        assert_eq!(k.shape(), (5, 0));
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let f = fp();
        let p = f.require_prime().unwrap().get();
        let k = DenseMatrix::from_i64(1, 2, &[1, 1], f).kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(k.residues().unwrap(), &[p - 1, 1]);
    }

    #[test]
    fn kernel_over_rationals() {
        let m = DenseMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6], FieldSpec::Rationals);
        let k = m.kernel_basis();
        assert_eq!(k.shape(), (3, 2));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn rref_is_reduced() {
        let m = DenseMatrix::from_i64(3, 3, &[2, 4, 1, 1, 2, 0, 0, 0, 5], fp());
        let e = m.rref();
        assert_eq!(e.pivots, vec![0, 2]);
        let r = e.matrix.residues().unwrap();
        assert_eq!(&r[..3], &[1, 2, 0]);
        assert_eq!(&r[3..], &[0, 0, 1]);
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::prime(2).is_err());
        assert!(FieldSpec::prime(32001).is_err());
        assert!(FieldSpec::prime(32003).is_ok());
        assert!(FieldSpec::prime(101).is_ok());
        assert!(FieldSpec::prime(97).is_err());
    }

    #[test]
    fn prime_inverse() {
        let p = Prime::new(32003).unwrap();
        for a in [1, 2, 17, 32002] {
            assert_eq!(p.mul(a, p.inv(a)), 1);
        }
    }

    #[test]
    fn splitmix_reference_vectors() {
        // Published SplitMix64 outputs for seed 1234567.
        let mut rng = SeededRng::new(1_234_567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn pinned_field_draws() {
        // Computed with an independent Python SplitMix64.
        let mut rng = SeededRng::new(0x5EED);
        let draws: Vec<u64> = (0..3).map(|_| rng.random_field_element(fp()).unwrap()).collect();
        assert_eq!(draws, vec![1243, 10650, 11670]);
        assert_eq!(rng.counter(), 3);
    }

    #[test]
    fn equal_seeds_equal_streams() {
        let mut a = SeededRng::new(99);
        let mut b = SeededRng::new(99);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn rationals_cannot_be_sampled() {
        let mut rng = SeededRng::new(1);
        assert!(matches!(
            rng.random_field_element(FieldSpec::Rationals),
            Err(Error::UnsupportedSampling)
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial_poly(2, -1), 0);
        assert_eq!(binomial_poly(2, -3), 1);
        assert_eq!(binomial_poly(3, -5), -4);
        for n in 1..6 {
            for k in 0..10 {
                assert_eq!(binomial_poly(n, k) as u64, binomial(n as i64 + k, n as i64));
            }
        }
    }
}
