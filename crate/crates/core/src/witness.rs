//! Positive maps and entanglement witnesses built from equi-biased bases.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::distributions::ProbDist;
use crate::error::{MebError, MebResult};
use crate::io::{fmt_num, CsvRecord, MatrixDoc};
use crate::linalg::{hermitian_eigenvalues, kron, CMatrix, RMatrix};
use crate::meb::{q_of_mu, MebSet};
use crate::uncertainty::{f_factor, DensityMatrix};

const ROTATION_TOL: f64 = 1e-12;

/// One orthogonal rotation per basis, each fixing `n* = (1,…,1)/√d`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationSet {
    rotations: Vec<RMatrix>,
}

impl RotationSet {
    pub fn new(rotations: Vec<RMatrix>) -> MebResult<Self> {
        for (i, o) in rotations.iter().enumerate() {
            let d = o.nrows();
            if o.ncols() != d {
                return Err(MebError::InvalidRotation(format!("rotation {i} is not square")));
            }
            let orth = (o.transpose() * o - RMatrix::identity(d, d)).amax();
            if orth > ROTATION_TOL {
                return Err(MebError::InvalidRotation(format!("rotation {i} not orthogonal ({orth:.3e})")));
            }
            let n = RMatrix::from_element(d, 1, 1.0 / (d as f64).sqrt());
            let fix = (o * &n - &n).amax();
            if fix > ROTATION_TOL {
                return Err(MebError::InvalidRotation(format!("rotation {i} moves n* ({fix:.3e})")));
            }
        }
        Ok(Self { rotations })
    }

    pub fn identity(d: usize, l: usize) -> Self {
        Self { rotations: vec![RMatrix::identity(d, d); l] }
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn get(&self, alpha: usize) -> &RMatrix {
        &self.rotations[alpha]
    }

    pub fn is_identity(&self) -> bool {
        self.rotations.iter().all(|o| (o - RMatrix::identity(o.nrows(), o.ncols())).amax() == 0.0)
    }

    fn check(&self, set: &MebSet) -> MebResult<()> {
        if self.len() != set.len() {
            return Err(MebError::DimensionMismatch(format!(
                "{} rotations for {} bases",
                self.len(),
                set.len()
            )));
        }
        if let Some(o) = self.rotations.iter().find(|o| o.nrows() != set.d) {
            return Err(MebError::DimensionMismatch(format!("rotation of size {}", o.nrows())));
        }
        Ok(())
    }
}

/// `γ = [(d−1) / ((d−1) f_L(q) + L(L−1)(d q_max − 1))]^{1/2}`.
pub fn gamma_factor(q: &ProbDist, l: usize) -> MebResult<f64> {
    let d = q.d() as f64;
    let l_f = l as f64;
    let denom = (d - 1.0) * f_factor(q, l) + l_f * (l_f - 1.0) * (d * q.q_max() - 1.0);
    let radicand = (d - 1.0) / denom;
    if radicand <= 0.0 || !radicand.is_finite() {
        return Err(MebError::GammaRadicand(radicand));
    }
    Ok(radicand.sqrt())
}

/// `ΦX = c Tr[X] I − γ/(d−1) Σ_{α,k,l} O_kl Tr[X P_l] P_k` with
/// `c = (d+γL−1)/(d(d−1))`.
pub fn positive_map_apply(x: &CMatrix, set: &MebSet, rot: &RotationSet, gamma: f64) -> MebResult<CMatrix> {
    let d = set.d;
    if x.rows() != d || x.cols() != d {
        return Err(MebError::DimensionMismatch(format!("X is {}x{}, d = {d}", x.rows(), x.cols())));
    }
    rot.check(set)?;
    let (d_f, l_f) = (d as f64, set.len() as f64);
    let c = (d_f + gamma * l_f - 1.0) / (d_f * (d_f - 1.0));
    let mut out = CMatrix::identity(d).scale(x.trace() * c);
    for (alpha, basis) in set.bases.iter().enumerate() {
        let cols: Vec<Vec<C64>> = (0..d).map(|j| basis.column(j)).collect();
        let weights: Vec<C64> = cols.iter().map(|e| x.sandwich(e, e)).collect();
        let o = rot.get(alpha);
        for (k, e) in cols.iter().enumerate() {
            let coeff: C64 = (0..d).map(|l| weights[l] * o[(k, l)]).sum();
            out = out.sub(&CMatrix::outer(e).scale(coeff * (gamma / (d_f - 1.0))))?;
        }
    }
    Ok(out)
}

/// `(Tr A)²/(d−1) − Tr A²`; nonnegative certifies `A ≥ 0`.
pub fn mehta_margin(a: &CMatrix) -> MebResult<f64> {
    let defect = a.hermiticity_defect();
    if defect > 1e-10 {
        return Err(MebError::NotHermitian(defect));
    }
    let d = a.rows() as f64;
    let tr = a.trace().re;
    let tr_sq: f64 = a.inner().iter().map(|z| z.norm_sqr()).sum();
    Ok(tr * tr / (d - 1.0) - tr_sq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessVariant {
    Meb,
    Mub,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOperator {
    pub d: usize,
    pub matrix: CMatrix,
    pub gamma: f64,
    pub variant: WitnessVariant,
    pub identity_rotations: bool,
}

impl WitnessOperator {
    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc::from_matrix(&self.matrix)
    }

    /// `⟨a⊗b|W|a⊗b⟩`.
    pub fn product_expectation(&self, a: &[C64], b: &[C64]) -> f64 {
        let psi: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        self.matrix.sandwich(&psi, &psi).re
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> MebResult<f64> {
        Ok(rho.matrix().matmul(&self.matrix)?.trace().re)
    }
}

/// `W = ((d+γL−1)/d) I⊗I − γ Σ_{α,k,l} O_kl P̄_l ⊗ P_k`; the MUB variant
/// fixes `γ = 1` and requires uniform `q`.
pub fn witness_operator(set: &MebSet, rot: &RotationSet, variant: WitnessVariant) -> MebResult<WitnessOperator> {
    rot.check(set)?;
    let d = set.d;
    let gamma = match variant {
        WitnessVariant::Meb => gamma_factor(&set.dist, set.len())?,
        WitnessVariant::Mub => {
            let u = 1.0 / d as f64;
            if set.dist.q().iter().any(|x| (x - u).abs() > 1e-12) {
                return Err(MebError::InvalidDistribution("MUB witness needs uniform q".into()));
            }
            1.0
        }
    };
    let (d_f, l_f) = (d as f64, set.len() as f64);
    let mut w = CMatrix::identity(d * d).scale(C64::new((d_f + gamma * l_f - 1.0) / d_f, 0.0));
    for (alpha, basis) in set.bases.iter().enumerate() {
        let projs: Vec<CMatrix> = (0..d).map(|j| CMatrix::outer(&basis.column(j))).collect();
        let o = rot.get(alpha);
        for k in 0..d {
            for l in 0..d {
                if o[(k, l)] == 0.0 {
                    continue;
                }
                let term = kron(&projs[l].conj(), &projs[k]);
                w = w.sub(&term.scale(C64::new(gamma * o[(k, l)], 0.0)))?;
            }
        }
    }
    Ok(WitnessOperator { d, matrix: w, gamma, variant, identity_rotations: rot.is_identity() })
}

/// `|φ⁺⟩ = d^{-1/2} Σ_i |ii⟩`.
pub fn max_entangled(d: usize) -> Vec<C64> {
    let s = 1.0 / (d as f64).sqrt();
    (0..d * d).map(|i| if i % (d + 1) == 0 { C64::new(s, 0.0) } else { C64::new(0.0, 0.0) }).collect()
}

/// `ω|φ⁺⟩⟨φ⁺| + (1−ω) I/d²`.
pub fn isotropic_state(d: usize, omega: f64) -> MebResult<DensityMatrix> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(MebError::OutOfRange { name: "omega", range: "[0, 1]", value: omega });
    }
    let n = d * d;
    let phi = CMatrix::outer(&max_entangled(d)).scale(C64::new(omega, 0.0));
    let noise = CMatrix::identity(n).scale(C64::new((1.0 - omega) / n as f64, 0.0));
    DensityMatrix::new(phi.add(&noise)?)
}

/// `Tr[ρ_iso(ω) W] = ((d−1)/d)(1 − Lγω)` for identity rotations.
pub fn isotropic_witness_value(d: usize, l: usize, gamma: f64, omega: f64) -> f64 {
    let d = d as f64;
    (d - 1.0) / d * (1.0 - l as f64 * gamma * omega)
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue(a: &CMatrix) -> MebResult<f64> {
    Ok(hermitian_eigenvalues(a, 1e-10)?.min())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub mu: f64,
    pub threshold_meb: f64,
    pub threshold_mub: f64,
}

impl CsvRecord for ThresholdPoint {
    fn header() -> &'static str {
        "mu,threshold_meb,threshold_mub"
    }

    fn fields(&self) -> Vec<String> {
        vec![fmt_num(self.mu), fmt_num(self.threshold_meb), fmt_num(self.threshold_mub)]
    }
}

/// `n` evenly spaced points covering `[1/3, 1/2]`.
pub fn mu_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = (1.0 / 3.0, 0.5);
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Detection threshold `1/(Lγ)` along `mu_grid`, with the MUB reference `1/L`.
pub fn threshold_curve(d: usize, l: usize, mu_grid: &[f64]) -> MebResult<Vec<ThresholdPoint>> {
    if d != 3 {
        return Err(MebError::UnsupportedDimension(d, "threshold_curve"));
    }
    mu_grid
        .iter()
        .map(|&mu| {
            let (p, z, m) = q_of_mu(mu)?;
            let gamma = gamma_factor(&ProbDist::new(vec![p, z, m])?, l)?;
            Ok(ThresholdPoint { mu, threshold_meb: 1.0 / (l as f64 * gamma), threshold_mub: 1.0 / l as f64 })
        })
        .collect()
}
