//! Uncertainty relations for sets of equi-biased bases.
//!
//! Covers measurement statistics, the overlap (Gram) matrix of the
//! two-copy vectors `|v_k^(α)⟩ = d^{-1/2} Σ_j ω^{kj} |e_j^(α)⟩|ē_j^(α)⟩`,
//! its closed-form spectrum, the probability-square bound, the entropic
//! bound derived from it, and the purity decomposition behind the proof.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::distributions::{n_abs, n_submatrix, ProbDist};
use crate::error::{MebError, MebResult};
use crate::linalg::{hermitian_eigenvalues, hermitian_function, CMatrix, HermitianSpectrum};
use crate::meb::MebSet;

/// Tolerance on trace, Hermiticity and eigenvalues of a density matrix.
pub const STATE_TOL: f64 = 1e-12;

/// Smallest Gram eigenvalue accepted as positive definite.
pub const GRAM_PD_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> MebResult<Self> {
        if !matrix.is_square() {
            return Err(MebError::InvalidDensityMatrix(format!(
                "shape {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(MebError::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let spectrum = hermitian_eigenvalues(&matrix, STATE_TOL)?;
        if spectrum.min() < -STATE_TOL {
            return Err(MebError::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                spectrum.min()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { matrix: CMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0)) }
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[C64]) -> MebResult<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(MebError::InvalidDensityMatrix("zero or non-finite state vector".into()));
        }
        let scaled: Vec<C64> = psi.iter().map(|z| z / norm.sqrt()).collect();
        Ok(Self { matrix: CMatrix::outer(&scaled) })
    }

    /// Uniform mixture of the given orthonormal vectors.
    pub fn mixed_on(vectors: &[Vec<C64>]) -> MebResult<Self> {
        let d = vectors.first().map(Vec::len).unwrap_or(0);
        let w = C64::new(1.0 / vectors.len() as f64, 0.0);
        let mut m = CMatrix::zeros(d, d);
        for v in vectors {
            m = m.add(&CMatrix::outer(v).scale(w))?;
        }
        Self::new(m)
    }

    pub fn d(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.inner().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `p[α][j]`, outcome probabilities per basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbTable {
    pub p: Vec<Vec<f64>>,
}

impl ProbTable {
    pub fn l(&self) -> usize {
        self.p.len()
    }

    pub fn d(&self) -> usize {
        self.p.first().map(Vec::len).unwrap_or(0)
    }

    /// `Σ_{α,j} p²`.
    pub fn sum_of_squares(&self) -> f64 {
        self.p.iter().flatten().map(|x| x * x).sum()
    }
}

fn check_dims(rho: &DensityMatrix, set: &MebSet) -> MebResult<()> {
    if rho.d() != set.d {
        return Err(MebError::DimensionMismatch(format!("state d = {}, set d = {}", rho.d(), set.d)));
    }
    Ok(())
}

pub fn measurement_probs(rho: &DensityMatrix, set: &MebSet) -> MebResult<ProbTable> {
    check_dims(rho, set)?;
    let p = set
        .bases
        .iter()
        .map(|b| {
            (0..set.d)
                .map(|j| {
                    let e = b.column(j);
                    rho.matrix.sandwich(&e, &e).re
                })
                .collect()
        })
        .collect();
    Ok(ProbTable { p })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub l: usize,
    pub d: usize,
    /// `L(d−1)` square, row `(α,k)` at `α(d−1) + k − 1`.
    pub matrix: CMatrix,
    pub dist: ProbDist,
}

impl GramMatrix {
    pub fn eigenvalues(&self) -> MebResult<HermitianSpectrum> {
        hermitian_eigenvalues(&self.matrix, 1e-12)
    }
}

/// The idealized block matrix `I_L ⊗ I_{d−1} + S_L ⊗ N`, with `S_L` the
/// all-ones matrix minus the identity.
pub fn gram_matrix(q: &ProbDist, l: usize) -> GramMatrix {
    let d = q.d();
    let n = n_submatrix(q);
    let m = d - 1;
    let matrix = CMatrix::from_fn(l * m, l * m, |r, c| {
        let (a, k) = (r / m, r % m);
        let (b, kp) = (c / m, c % m);
        match (a == b, k == kp) {
            (true, true) => C64::new(1.0, 0.0),
            (true, false) => C64::new(0.0, 0.0),
            (false, _) => n.get(k, kp),
        }
    });
    GramMatrix { l, d, matrix, dist: q.clone() }
}

/// Overlap matrix of the two-copy vectors of an actual set,
/// `G^{αβ}_{kk'} = (1/d) Σ_{j,j'} ω^{k'j' − kj} |⟨e_j^(α)|e_{j'}^(β)⟩|²`.
pub fn overlap_gram(set: &MebSet) -> GramMatrix {
    let (d, l) = (set.d, set.len());
    let m = d - 1;
    let w = |e: i64| C64::from_polar(1.0, TAU * e.rem_euclid(d as i64) as f64 / d as f64);
    let transitions: Vec<Vec<Vec<Vec<f64>>>> =
        (0..l).map(|a| (0..l).map(|b| set.transitions(a, b)).collect()).collect();
    let matrix = CMatrix::from_fn(l * m, l * m, |r, c| {
        let (a, k) = (r / m, (r % m + 1) as i64);
        let (b, kp) = (c / m, (c % m + 1) as i64);
        let t = &transitions[a][b];
        let mut acc = C64::new(0.0, 0.0);
        for (j, row) in t.iter().enumerate() {
            for (jp, &x) in row.iter().enumerate() {
                acc += w(kp * jp as i64 - k * j as i64) * x;
            }
        }
        acc / d as f64
    });
    GramMatrix { l, d, matrix, dist: set.dist.clone() }
}

/// Closed-form spectrum of [`gram_matrix`].
///
/// Each conjugate pair `(k, d−k)` contributes `1 ± (L−1)|N|` once and
/// `1 ∓ |N|` with multiplicity `L−1`. For even `d` the self-paired index
/// `d/2` carries the real value `s = Σ_m (−1)^m q_m`, giving `1 + (L−1)s`
/// once and `1 − s` with multiplicity `L−1`.
pub fn gram_eigenvalues_closed(q: &ProbDist, l: usize) -> MebResult<HermitianSpectrum> {
    let d = q.d();
    let lm1 = (l - 1) as f64;
    let mut out = Vec::with_capacity(l * (d - 1));
    for k in 1..=(d - 1) / 2 {
        let a = n_abs(q, k)?;
        out.push(1.0 + lm1 * a);
        out.push(1.0 - lm1 * a);
        for _ in 1..l {
            out.push(1.0 + a);
            out.push(1.0 - a);
        }
    }
    if d.is_multiple_of(2) {
        let s: f64 = q.q().iter().enumerate().map(|(m, x)| if m % 2 == 0 { *x } else { -x }).sum();
        out.push(1.0 + lm1 * s);
        for _ in 1..l {
            out.push(1.0 - s);
        }
    }
    Ok(HermitianSpectrum::from_unsorted(out))
}

/// `f_L(q) = 1 + (L−1) max_k |N_{k,d−k}|` over `1 ≤ k ≤ ⌊d/2⌋`.
pub fn f_factor(q: &ProbDist, l: usize) -> f64 {
    let max_n = (1..=q.d() / 2)
        .map(|k| n_abs(q, k).expect("k within range"))
        .fold(0.0, f64::max);
    1.0 + (l as f64 - 1.0) * max_n
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbSquareBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl ProbSquareBound {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `Σ p² ≤ f_L(q)(Tr ρ² − 1/d) + L/d`.
pub fn prob_square_bound(rho: &DensityMatrix, set: &MebSet) -> MebResult<ProbSquareBound> {
    let pt = measurement_probs(rho, set)?;
    let d = set.d as f64;
    let l = set.len();
    let rhs = f_factor(&set.dist, l) * (rho.purity() - 1.0 / d) + l as f64 / d;
    Ok(ProbSquareBound { lhs: pt.sum_of_squares(), rhs })
}

/// `Ω_l^(β) = (1/d) Σ_j ω^{−lj} p_j^(β)` for `l = 1..d−1`, flattened as
/// `β(d−1) + l − 1`.
pub fn omega_vector(pt: &ProbTable) -> Vec<C64> {
    let d = pt.d();
    let mut out = Vec::with_capacity(pt.l() * (d - 1));
    for row in &pt.p {
        for l in 1..d {
            let s: C64 = row
                .iter()
                .enumerate()
                .map(|(j, &p)| C64::from_polar(p, -TAU * ((l * j) % d) as f64 / d as f64))
                .sum();
            out.push(s / d as f64);
        }
    }
    out
}

pub fn omega_norm_sqr(omega: &[C64]) -> f64 {
    omega.iter().map(|z| z.norm_sqr()).sum()
}

/// Precomputed inverse of a set's overlap matrix for repeated evaluation
/// of the purity decomposition.
#[derive(Clone, Debug)]
pub struct PurityDecomposition {
    inverse: CMatrix,
    d: usize,
    min_eigenvalue: f64,
}

impl PurityDecomposition {
    pub fn new(set: &MebSet) -> MebResult<Self> {
        let g = overlap_gram(set);
        let (spectrum, inverse) = hermitian_function(&g.matrix, 1e-10, f64::recip)?;
        let min_eigenvalue = spectrum.min();
        if min_eigenvalue <= GRAM_PD_TOL {
            return Err(MebError::IndefiniteGram(min_eigenvalue));
        }
        Ok(Self { inverse, d: set.d, min_eigenvalue })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// `⟨χ|χ⟩ = (1/d)Tr ρ² − 1/d² − Ω†G⁻¹Ω`.
    pub fn residual(&self, rho: &DensityMatrix, set: &MebSet) -> MebResult<f64> {
        let omega = omega_vector(&measurement_probs(rho, set)?);
        let quad = self.inverse.sandwich(&omega, &omega).re;
        let d = self.d as f64;
        Ok(rho.purity() / d - 1.0 / (d * d) - quad)
    }
}

pub fn purity_decomposition_residual(rho: &DensityMatrix, set: &MebSet) -> MebResult<f64> {
    check_dims(rho, set)?;
    PurityDecomposition::new(set)?.residual(rho, set)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    Bits,
    Nats,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Bits => x.log2(),
            LogBase::Nats => x.ln(),
        }
    }

    /// `x log x` with the continuous extension at 0.
    pub fn xlogx(self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            x * self.log(x)
        }
    }
}

pub fn shannon_entropy(p: &[f64], base: LogBase) -> f64 {
    -p.iter().map(|&x| base.xlogx(x)).sum::<f64>()
}

/// `[L − KC](K+1)log(K+1) − [L − (K+1)C] K log K` with `K = ⌊L/C⌋`,
/// clamped at 0.
pub fn entropy_lower_bound(c: f64, l: usize, base: LogBase) -> f64 {
    let l = l as f64;
    let k = (l / c).floor();
    let bound = (l - k * c) * base.xlogx(k + 1.0) - (l - (k + 1.0) * c) * base.xlogx(k);
    bound.max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyBound {
    pub entropy_sum: f64,
    pub lower_bound: f64,
}

impl EntropyBound {
    pub fn slack(&self) -> f64 {
        self.entropy_sum - self.lower_bound
    }
}

pub fn entropy_bound(rho: &DensityMatrix, set: &MebSet, base: LogBase) -> MebResult<EntropyBound> {
    let pt = measurement_probs(rho, set)?;
    let c = prob_square_bound(rho, set)?.rhs;
    Ok(EntropyBound {
        entropy_sum: pt.p.iter().map(|row| shannon_entropy(row, base)).sum(),
        lower_bound: entropy_lower_bound(c, set.len(), base),
    })
}
