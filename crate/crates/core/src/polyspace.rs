//! Graded pieces of `R = K[x_0, ..., x_n]` and of quotients `R_X = R / I_X`.
//!
//! Monomials of a fixed degree are listed in graded reverse lexicographic
//! order with `x_0 > x_1 > ... > x_n`, largest first. Every matrix in the
//! crate is written in these bases, so the order is part of the serialized
//! format and must not change.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::exactfield::{binomial, binomial_poly, DenseMatrix, Prime, SeededRng};
use crate::presentation::LinearFormMatrix;
use crate::restriction::{AcmVarietyDescriptor, VarietyMode};
use crate::Error;

pub type Exponent = Vec<u32>;

/// Compares two exponent vectors of equal degree in grevlex.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller power of the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// The monomials of degree `d` in `n + 1` variables.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: u32,
    d: i64,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(n: u32, d: i64) -> Self {
        assert!(n >= 1, "need at least two variables");
        let mut monomials = Vec::new();
        if d >= 0 {
            let mut current = vec![0u32; n as usize + 1];
            compositions(d as u32, 0, &mut current, &mut monomials);
            monomials.sort_by(|a, b| grevlex_cmp(b, a));
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialBasis { n, d, monomials, index }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn compositions(rest: u32, pos: usize, current: &mut Exponent, out: &mut Vec<Exponent>) {
    if pos + 1 == current.len() {
        current[pos] = rest;
        out.push(current.clone());
        return;
    }
    for e in 0..=rest {
        current[pos] = e;
        compositions(rest - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

pub fn monomial_basis(n: u32, d: i64) -> MonomialBasis {
    MonomialBasis::new(n, d)
}

/// A homogeneous polynomial, stored as coefficients over
/// `monomial_basis(n, degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousForm {
    pub n: u32,
    pub degree: u32,
    pub coeffs: Vec<u64>,
}

impl HomogeneousForm {
    pub fn new(n: u32, degree: u32, coeffs: Vec<u64>) -> Result<Self, Error> {
        let expected = binomial(n as i64 + degree as i64, n as i64) as usize;
        if coeffs.len() != expected {
            return Err(Error::Shape(format!(
                "form of degree {degree} in {} variables needs {expected} coefficients, got {}",
                n + 1,
                coeffs.len()
            )));
        }
        Ok(HomogeneousForm { n, degree, coeffs })
    }

    /// Uniformly random coefficients, one draw per monomial.
    pub fn random(n: u32, degree: u32, rng: &mut SeededRng, p: Prime) -> Self {
        let len = binomial(n as i64 + degree as i64, n as i64) as usize;
        let coeffs = (0..len).map(|_| rng.residue(p)).collect();
        HomogeneousForm { n, degree, coeffs }
    }
}

/// Twists of a graded minimal free resolution
/// `0 -> F_c -> ... -> F_1 -> R -> R_X -> 0` with `F_i = sum_j R(-n_j^i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionDegreeData {
    pub n: u32,
    /// `betti[i - 1]` holds the twists `n_j^i` of `F_i`.
    pub betti: Vec<Vec<u32>>,
}

impl ResolutionDegreeData {
    pub fn new(n: u32, betti: Vec<Vec<u32>>) -> Result<Self, Error> {
        if betti.len() > n as usize {
            return Err(Error::Precondition(format!(
                "codimension {} exceeds ambient dimension {n}",
                betti.len()
            )));
        }
        if betti.iter().flatten().any(|&t| t == 0) {
            return Err(Error::Precondition("resolution twists must be >= 1".into()));
        }
        if let Some(empty) = betti.iter().position(Vec::is_empty) {
            return Err(Error::Precondition(format!("F_{} is empty", empty + 1)));
        }
        if !betti.is_empty() {
            // R_X is torsion, so the alternating sum of ranks vanishes.
            let rank: i64 = 1 + betti
                .iter()
                .enumerate()
                .map(|(i, b)| if i % 2 == 0 { -(b.len() as i64) } else { b.len() as i64 })
                .sum::<i64>();
            if rank != 0 {
                return Err(Error::Precondition(format!(
                    "alternating sum of Betti numbers is {rank}, expected 0"
                )));
            }
        }
        Ok(ResolutionDegreeData { n, betti })
    }

    /// Koszul twists of a complete intersection: `F_i` has one summand per
    /// `i`-subset of the degrees, twisted by the subset sum.
    pub fn koszul(n: u32, degrees: &[u32]) -> Result<Self, Error> {
        let c = degrees.len();
        let mut betti = vec![Vec::new(); c];
        for mask in 1u32..(1 << c) {
            let size = mask.count_ones() as usize;
            let twist = (0..c).filter(|&j| mask & (1 << j) != 0).map(|j| degrees[j]).sum();
            betti[size - 1].push((mask, twist));
        }
        let betti = betti
            .into_iter()
            .map(|mut level| {
                level.sort_by_key(|&(mask, _)| subset_order_key(mask, c));
                level.into_iter().map(|(_, t)| t).collect()
            })
            .collect();
        ResolutionDegreeData::new(n, betti)
    }

    pub fn codim(&self) -> usize {
        self.betti.len()
    }

    pub fn dim(&self) -> i64 {
        self.n as i64 - self.codim() as i64
    }

    /// `dim (R_X)_k`.
    pub fn hilbert_function(&self, k: i64) -> u64 {
        let n = self.n as i64;
        let mut total = binomial(n + k, n) as i128;
        for (i, twists) in self.betti.iter().enumerate() {
            let sign = if i % 2 == 0 { -1 } else { 1 };
            for &t in twists {
                total += sign * binomial(n + k - t as i64, n) as i128;
            }
        }
        u64::try_from(total).expect("Hilbert function of a resolution is non-negative")
    }

    /// The Hilbert polynomial of `R_X`, i.e. `chi(O_X(k))` for every `k`.
    pub fn hilbert_polynomial(&self, k: i64) -> i64 {
        let mut total = binomial_poly(self.n, k);
        for (i, twists) in self.betti.iter().enumerate() {
            let sign = if i % 2 == 0 { -1 } else { 1 };
            for &t in twists {
                total += sign * binomial_poly(self.n, k - t as i64);
            }
        }
        total
    }
}

/// Lexicographic order on subsets listed as increasing index sequences.
fn subset_order_key(mask: u32, c: usize) -> Vec<usize> {
    (0..c).filter(|&j| mask & (1 << j) != 0).collect()
}

/// `dim (R_X)_k` from resolution degree data.
pub fn hilbert_rx(res: &ResolutionDegreeData, k: i64) -> u64 {
    res.hilbert_function(k)
}

/// Matrix of the degree-`m` piece `H^0(O(m))^{b_src} -> H^0(O(m+1))^{a_tgt}`
/// of the map given by a matrix of linear forms. Column `(c, mu)` sits at
/// `c * |R_m| + idx(mu)`, row `(r, nu)` at `r * |R_{m+1}| + idx(nu)`.
pub fn mult_map(phi: &LinearFormMatrix, m: i64) -> DenseMatrix {
    let n = phi.n();
    let src = MonomialBasis::new(n, m);
    let tgt = MonomialBasis::new(n, m + 1);
    let p = phi.prime();
    let (a, b) = (phi.a_tgt(), phi.b_src());
    let (ds, dt) = (src.len(), tgt.len());
    let mut data = vec![0u64; a * dt * b * ds];
    let cols = b * ds;
    let mut shifted = vec![0u32; n as usize + 1];
    for (mi, mono) in src.monomials().iter().enumerate() {
        for var in 0..=n as usize {
            shifted.copy_from_slice(mono);
            shifted[var] += 1;
            let row_in_block = tgt.index_of(&shifted).expect("shifted monomial in basis");
            for c in 0..b {
                for r in 0..a {
                    let coef = phi.coeff(r, c, var);
                    if coef != 0 {
                        let k = (r * dt + row_in_block) * cols + c * ds + mi;
                        data[k] = p.add(data[k], coef);
                    }
                }
            }
        }
    }
    DenseMatrix::from_residues(a * dt, cols, p, data)
}

/// A graded piece `(R/I)_k` of a quotient by explicit forms, with normal
/// forms taken relative to the RREF of the spanning set `{f_i * mu}` of `I_k`.
/// The standard monomials are those that are not pivots.
#[derive(Clone, Debug)]
pub struct QuotientPiece {
    basis: MonomialBasis,
    standard: Vec<usize>,
    std_pos: Vec<Option<usize>>,
    /// For pivot monomials: the RREF row restricted to standard monomials.
    pivot_rows: HashMap<usize, Vec<u64>>,
    p: Prime,
}

impl QuotientPiece {
    pub fn new(n: u32, k: i64, forms: &[HomogeneousForm], p: Prime) -> Self {
        let basis = MonomialBasis::new(n, k);
        let cols = basis.len();
        let mut rows: Vec<u64> = Vec::new();
        let mut nrows = 0;
        for f in forms {
            let shift_basis = MonomialBasis::new(n, k - f.degree as i64);
            let f_basis = MonomialBasis::new(n, f.degree as i64);
            for mu in shift_basis.monomials() {
                let mut row = vec![0u64; cols];
                for (fi, nu) in f_basis.monomials().iter().enumerate() {
                    let coef = f.coeffs[fi];
                    if coef == 0 {
                        continue;
                    }
                    let prod: Exponent = mu.iter().zip(nu).map(|(x, y)| x + y).collect();
                    let idx = basis.index_of(&prod).expect("product monomial in basis");
                    row[idx] = p.add(row[idx], coef);
                }
                rows.extend(row);
                nrows += 1;
            }
        }
        let ech = DenseMatrix::from_residues(nrows, cols, p, rows).rref();
        let mut std_pos = vec![None; cols];
        let mut is_pivot = vec![false; cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let standard: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
        for (pos, &c) in standard.iter().enumerate() {
            std_pos[c] = Some(pos);
        }
        let reduced = ech.matrix.residues().expect("prime field");
        let pivot_rows = ech
            .pivots
            .iter()
            .enumerate()
            .map(|(r, &c)| {
                let row = &reduced[r * cols..(r + 1) * cols];
                (c, standard.iter().map(|&s| row[s]).collect())
            })
            .collect();
        QuotientPiece {
            basis,
            standard,
            std_pos,
            pivot_rows,
            p,
        }
    }

    /// `dim (R/I)_k`.
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Standard monomials, as indices into [`Self::basis`].
    pub fn standard(&self) -> &[usize] {
        &self.standard
    }

    /// Normal form of a single monomial, as coordinates over the standard
    /// monomials. Non-zero entries are pushed as `(position, coefficient)`.
    pub fn monomial_normal_form(&self, idx: usize, out: &mut Vec<(usize, u64)>) {
        out.clear();
        if let Some(pos) = self.std_pos[idx] {
            out.push((pos, 1));
        } else {
            let row = &self.pivot_rows[&idx];
            out.extend(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(pos, &v)| (pos, self.p.neg(v))),
            );
        }
    }
}

/// Matrix of `(R_X)_m^{b_src} -> (R_X)_{m+1}^{a_tgt}` in normal-form
/// bases, for a variety with explicit complete-intersection forms.
pub fn mult_map_on_x(phi: &LinearFormMatrix, m: i64, x: &AcmVarietyDescriptor) -> Result<DenseMatrix, Error> {
    let forms = exact_forms(x)?;
    if x.n() != phi.n() {
        return Err(Error::Shape(format!(
            "presentation lives on P^{} but X sits in P^{}",
            phi.n(),
            x.n()
        )));
    }
    let p = phi.prime();
    let src = QuotientPiece::new(x.n(), m, forms, p);
    let tgt = QuotientPiece::new(x.n(), m + 1, forms, p);
    Ok(quotient_mult_map(phi, &src, &tgt))
}

pub(crate) fn exact_forms(x: &AcmVarietyDescriptor) -> Result<&[HomogeneousForm], Error> {
    match x.mode() {
        VarietyMode::CompleteIntersection { degrees, forms } => match forms {
            Some(f) => Ok(f),
            None if degrees.is_empty() => Ok(&[]),
            None => Err(Error::ExactModeUnavailable),
        },
        VarietyMode::DegreeData { .. } => Err(Error::ExactModeUnavailable),
    }
}

pub(crate) fn quotient_mult_map(phi: &LinearFormMatrix, src: &QuotientPiece, tgt: &QuotientPiece) -> DenseMatrix {
    let n = phi.n() as usize;
    let p = phi.prime();
    let (a, b) = (phi.a_tgt(), phi.b_src());
    let (ds, dt) = (src.dim(), tgt.dim());
    let cols = b * ds;
    let mut data = vec![0u64; a * dt * cols];
    let mut shifted = vec![0u32; n + 1];
    let mut nf = Vec::new();
    for (si, &mono_idx) in src.standard().iter().enumerate() {
        let mono = &src.basis().monomials()[mono_idx];
        for var in 0..=n {
            shifted.copy_from_slice(mono);
            shifted[var] += 1;
            let idx = tgt.basis().index_of(&shifted).expect("shifted monomial in basis");
            tgt.monomial_normal_form(idx, &mut nf);
            for c in 0..b {
                for r in 0..a {
                    let coef = phi.coeff(r, c, var);
                    if coef == 0 {
                        continue;
                    }
                    for &(pos, v) in &nf {
                        let k = (r * dt + pos) * cols + c * ds + si;
                        data[k] = p.add(data[k], p.mul(coef, v));
                    }
                }
            }
        }
    }
    DenseMatrix::from_residues(a * dt, cols, p, data)
}
