//! Construction and verification of mutually equi-biased bases.
//!
//! A set is stored as `L` unitaries whose columns are the basis states in
//! the standard basis; the first member is always the identity. Complete
//! constructions exist here for d=2 (three bases, any δ ∈ [0,1)) and d=3
//! (four bases, μ ∈ [1/3, 1/2]).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::distributions::{segments, triangle_feasible, ProbDist};
use crate::error::{MebError, MebResult};
use crate::io::{complex_pairs, matrix_from_pairs};
use crate::linalg::{c, cis, is_unitary, matmul, unitarity_residual, CMatrix, DEFAULT_TOL};

/// Largest dimension accepted by the permutation search (d! candidates).
pub const MAX_VERIFY_DIM: usize = 6;

/// Cosines within this distance of ±1 are snapped onto ±1.
const COS_SNAP: f64 = 1e-12;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MebMeta {
    pub phase_case: Option<String>,
    pub q_order: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MebSet {
    pub d: usize,
    pub dist: ProbDist,
    pub bases: Vec<CMatrix>,
    pub meta: MebMeta,
}

impl MebSet {
    /// Number of bases `L`.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// The first `l` bases as a new set.
    pub fn truncated(&self, l: usize) -> Self {
        Self { bases: self.bases.iter().take(l).cloned().collect(), ..self.clone() }
    }

    /// `|⟨e_k^(α)|e_l^(β)⟩|²` as a `d × d` matrix.
    pub fn transitions(&self, alpha: usize, beta: usize) -> Vec<Vec<f64>> {
        let overlap = matmul(&self.bases[alpha].dagger(), &self.bases[beta])
            .expect("bases share the dimension d");
        (0..self.d)
            .map(|k| (0..self.d).map(|l| overlap.get(k, l).norm_sqr()).collect())
            .collect()
    }

    /// Projector onto state `k` of basis `alpha`.
    pub fn projector(&self, alpha: usize, k: usize) -> CMatrix {
        CMatrix::outer(&self.bases[alpha].column(k))
    }

    pub fn to_doc(&self) -> MebSetDoc {
        MebSetDoc {
            d: self.d,
            l: self.len(),
            q: self.dist.q().to_vec(),
            bases: self.bases.iter().map(complex_pairs).collect(),
            meta: self.meta.clone(),
        }
    }

    pub fn from_doc(doc: &MebSetDoc) -> MebResult<Self> {
        if doc.q.len() != doc.d {
            return Err(MebError::Malformed(format!("q has {} entries, d = {}", doc.q.len(), doc.d)));
        }
        if doc.bases.len() != doc.l {
            return Err(MebError::Malformed(format!(
                "L = {} but {} bases present",
                doc.l,
                doc.bases.len()
            )));
        }
        let dist = ProbDist::new(doc.q.clone())?;
        let bases = doc
            .bases
            .iter()
            .map(|b| matrix_from_pairs(doc.d, doc.d, b))
            .collect::<MebResult<Vec<_>>>()?;
        Ok(Self { d: doc.d, dist, bases, meta: doc.meta.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("set document serializes")
    }

    pub fn from_json(s: &str) -> MebResult<Self> {
        let doc: MebSetDoc = serde_json::from_str(s)?;
        Self::from_doc(&doc)
    }
}

/// JSON form of a [`MebSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MebSetDoc {
    pub d: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub q: Vec<f64>,
    /// One row-major list of `[re, im]` pairs per basis.
    pub bases: Vec<Vec<[f64; 2]>>,
    pub meta: MebMeta,
}

// ---------------------------------------------------------------- d = 2

/// Three qubit bases `{I, U, DU}` with `q = ((1+δ)/2, (1−δ)/2)`.
pub fn build_d2(delta: f64) -> MebResult<MebSet> {
    if !(0.0..1.0).contains(&delta) {
        return Err(MebError::OutOfRange { name: "delta", range: "[0, 1)", value: delta });
    }
    let q0 = (1.0 + delta) / 2.0;
    let q1 = (1.0 - delta) / 2.0;
    let (s0, s1) = (q0.sqrt(), q1.sqrt());
    let u = CMatrix::new(2, 2, vec![c(s0, 0.0), c(s1, 0.0), c(s1, 0.0), c(-s0, 0.0)])?;
    let alpha = d2_phase(delta);
    let v = matmul(&CMatrix::diag(&[c(1.0, 0.0), cis(alpha)]), &u)?;
    Ok(MebSet {
        d: 2,
        dist: ProbDist::new(vec![q0, q1])?,
        bases: vec![CMatrix::identity(2), u, v],
        meta: MebMeta::default(),
    })
}

/// `α = arccos(δ / (1+δ))`, the relative phase between the second and
/// third qubit bases.
pub fn d2_phase(delta: f64) -> f64 {
    (delta / (1.0 + delta)).acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochDot {
    pub alpha: usize,
    pub beta: usize,
    pub k: usize,
    pub l: usize,
    pub dot: f64,
}

fn bloch_vector(psi: &[C64]) -> [f64; 3] {
    let cross = psi[0].conj() * psi[1];
    [2.0 * cross.re, 2.0 * cross.im, psi[0].norm_sqr() - psi[1].norm_sqr()]
}

/// Bloch-vector dot products `r_k^(α)·r_l^(β)` for every `α ≠ β`.
pub fn bloch_dots_d2(set: &MebSet) -> MebResult<Vec<BlochDot>> {
    if set.d != 2 {
        return Err(MebError::UnsupportedDimension(set.d, "bloch_dots_d2"));
    }
    let vecs: Vec<[[f64; 3]; 2]> = set
        .bases
        .iter()
        .map(|b| [bloch_vector(&b.column(0)), bloch_vector(&b.column(1))])
        .collect();
    let mut out = Vec::new();
    for alpha in 0..set.len() {
        for beta in 0..set.len() {
            if alpha == beta {
                continue;
            }
            for k in 0..2 {
                for l in 0..2 {
                    let (r, s) = (vecs[alpha][k], vecs[beta][l]);
                    let dot = r[0] * s[0] + r[1] * s[1] + r[2] * s[2];
                    out.push(BlochDot { alpha, beta, k, l, dot });
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- d = 3

fn check_mu_d3(mu: f64) -> MebResult<()> {
    if !(1.0 / 3.0..=0.5).contains(&mu) {
        return Err(MebError::OutOfRange { name: "mu", range: "[1/3,1/2]", value: mu });
    }
    Ok(())
}

/// The distribution `(q₊, q₀, q₋)` with coincidence index `μ`.
pub fn q_of_mu(mu: f64) -> MebResult<(f64, f64, f64)> {
    check_mu_d3(mu)?;
    let q_zero = (1.0 - mu) / 2.0;
    // (1+μ)² − 4(1−μ)² in factored form, exact at μ = 1/3
    let disc = (3.0 * mu - 1.0) * (3.0 - mu);
    let root = disc.max(0.0).sqrt();
    Ok(((1.0 + mu + root) / 4.0, q_zero, (1.0 + mu - root) / 4.0))
}

/// `θ^μ = arccos(−μ/(1−μ))`, in `[2π/3, π]`.
pub fn theta_of_mu(mu: f64) -> MebResult<f64> {
    check_mu_d3(mu)?;
    Ok((-mu / (1.0 - mu)).clamp(-1.0, 1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QSign {
    Plus,
    Zero,
    Minus,
}

/// Which of `(q₊, q₀, q₋)` sits at positions 0, 1, 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QOrder(pub [QSign; 3]);

impl QOrder {
    /// The six orderings in the row order of the correspondence table.
    pub const ALL: [QOrder; 6] = [
        QOrder([QSign::Plus, QSign::Zero, QSign::Minus]),
        QOrder([QSign::Plus, QSign::Minus, QSign::Zero]),
        QOrder([QSign::Zero, QSign::Plus, QSign::Minus]),
        QOrder([QSign::Zero, QSign::Minus, QSign::Plus]),
        QOrder([QSign::Minus, QSign::Plus, QSign::Zero]),
        QOrder([QSign::Minus, QSign::Zero, QSign::Plus]),
    ];

    pub fn row(self) -> usize {
        Self::ALL.iter().position(|o| *o == self).expect("all orderings are listed")
    }

    pub fn apply(self, (plus, zero, minus): (f64, f64, f64)) -> [f64; 3] {
        self.0.map(|s| match s {
            QSign::Plus => plus,
            QSign::Zero => zero,
            QSign::Minus => minus,
        })
    }
}

impl FromStr for QOrder {
    type Err = MebError;

    fn from_str(s: &str) -> MebResult<Self> {
        let signs: Vec<QSign> = s
            .chars()
            .map(|ch| match ch {
                '+' => Ok(QSign::Plus),
                '0' => Ok(QSign::Zero),
                '-' => Ok(QSign::Minus),
                other => Err(MebError::Malformed(format!("bad q-order symbol {other:?}"))),
            })
            .collect::<MebResult<_>>()?;
        let order = match signs.as_slice() {
            [a, b, c] => QOrder([*a, *b, *c]),
            _ => return Err(MebError::Malformed(format!("q-order {s:?} needs three symbols"))),
        };
        if !Self::ALL.contains(&order) {
            return Err(MebError::Malformed(format!("q-order {s:?} is not a permutation of +0-")));
        }
        Ok(order)
    }
}

impl fmt::Display for QOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            f.write_str(match s {
                QSign::Plus => "+",
                QSign::Zero => "0",
                QSign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

/// The three symmetric phase solutions: (a) `(0,θ)`, (b) `(θ,0)`, (c) `(θ,θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseCase {
    A,
    B,
    C,
}

impl PhaseCase {
    pub fn phases(self, theta: f64) -> (f64, f64) {
        match self {
            PhaseCase::A => (0.0, theta),
            PhaseCase::B => (theta, 0.0),
            PhaseCase::C => (theta, theta),
        }
    }
}

/// Choice of the two distinct phase pairs used for `V` and `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairChoice {
    AB,
    AC,
    BC,
}

impl PairChoice {
    /// Column order of the correspondence table.
    pub const ALL: [PairChoice; 3] = [PairChoice::AB, PairChoice::AC, PairChoice::BC];

    pub fn from_cases(first: PhaseCase, second: PhaseCase) -> MebResult<Self> {
        use PhaseCase::*;
        match (first, second) {
            (A, B) | (B, A) => Ok(PairChoice::AB),
            (A, C) | (C, A) => Ok(PairChoice::AC),
            (B, C) | (C, B) => Ok(PairChoice::BC),
            _ => Err(MebError::IdenticalPairs),
        }
    }

    pub fn column(self) -> usize {
        self as usize
    }

    /// Phase pairs `(α₁, α₂)` for `V` and `(β₁, β₂)` for `W`.
    ///
    /// For (a,b) the second pair is taken as `(−θ, 0)`: with `(θ, 0)` the
    /// relative phases of `W†V` would be `(−θ, θ)`, which only satisfies the
    /// summed phase constraint at θ = π.
    pub fn phase_pairs(self, theta: f64) -> ((f64, f64), (f64, f64)) {
        match self {
            PairChoice::AB => (PhaseCase::A.phases(theta), (-theta, 0.0)),
            PairChoice::AC => (PhaseCase::A.phases(theta), PhaseCase::C.phases(theta)),
            PairChoice::BC => (PhaseCase::B.phases(theta), PhaseCase::C.phases(theta)),
        }
    }
}

impl FromStr for PairChoice {
    type Err = MebError;

    fn from_str(s: &str) -> MebResult<Self> {
        let case = |ch: char| match ch.to_ascii_lowercase() {
            'a' => Ok(PhaseCase::A),
            'b' => Ok(PhaseCase::B),
            'c' => Ok(PhaseCase::C),
            other => Err(MebError::Malformed(format!("bad phase case {other:?}"))),
        };
        let chars: Vec<char> = s.chars().collect();
        match chars.as_slice() {
            [x, y] => Self::from_cases(case(*x)?, case(*y)?),
            _ => Err(MebError::Malformed(format!("pair choice {s:?} needs two letters"))),
        }
    }
}

impl fmt::Display for PairChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairChoice::AB => "ab",
            PairChoice::AC => "ac",
            PairChoice::BC => "bc",
        })
    }
}

/// Cyclic patterns generated by `V†U`, `W†U`, `W†V`, as shifts `c` with
/// `|X†Y|²_kl = q_{(k+l+c) mod 3}`: 0 is `q`, 1 is `q^(123)`, 2 is `q^(321)`.
/// Rows follow [`QOrder::ALL`], columns [`PairChoice::ALL`].
pub const SHIFT_TABLE: [[[usize; 3]; 3]; 6] = [
    [[0, 1, 2], [0, 2, 1], [1, 2, 0]],
    [[2, 0, 1], [2, 1, 0], [0, 1, 2]],
    [[1, 2, 0], [1, 0, 2], [2, 0, 1]],
    [[1, 2, 0], [1, 0, 2], [2, 0, 1]],
    [[2, 0, 1], [2, 1, 0], [0, 1, 2]],
    [[0, 1, 2], [0, 2, 1], [1, 2, 0]],
];

pub fn shift_table(order: QOrder, pairs: PairChoice) -> [usize; 3] {
    SHIFT_TABLE[order.row()][pairs.column()]
}

/// Phases of the d=3 base unitary
/// `[[√q0, √q1, √q2], [√q1, √q2 e^{iξ0}, √q0 e^{iξ1}], [√q2, √q0 e^{iη1}, √q1 e^{iη0}]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct D3Phases {
    pub xi0: f64,
    pub xi1: f64,
    pub eta0: f64,
    pub eta1: f64,
}

impl D3Phases {
    pub fn unitary(&self, q: &[f64]) -> CMatrix {
        let s: Vec<f64> = q.iter().map(|x| x.sqrt()).collect();
        let re = |x: f64| c(x, 0.0);
        CMatrix::new(
            3,
            3,
            vec![
                re(s[0]),
                re(s[1]),
                re(s[2]),
                re(s[1]),
                cis(self.xi0) * s[2],
                cis(self.xi1) * s[0],
                re(s[2]),
                cis(self.eta1) * s[0],
                cis(self.eta0) * s[1],
            ],
        )
        .expect("3x3 entries")
    }
}

fn triangle_cosine(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        return 1.0;
    }
    let c = (num / den).clamp(-1.0, 1.0);
    if 1.0 - c.abs() < COS_SNAP {
        c.signum()
    } else {
        c
    }
}

/// Solves the orthogonality conditions for the phases of the base unitary,
/// trying sign branches in a fixed order and keeping the first unitary one.
pub fn d3_phases(p: &ProbDist) -> MebResult<D3Phases> {
    if !triangle_feasible(p)? {
        return Err(MebError::Infeasible(format!("q = {:?} violates the triangle inequalities", p.q())));
    }
    let l = segments(p.q());
    let (l0s, l1s, l2s) = (l[0] * l[0], l[1] * l[1], l[2] * l[2]);
    let a0 = triangle_cosine(l1s - l0s - l2s, 2.0 * l[0] * l[2]).acos();
    let a1 = triangle_cosine(l0s - l1s - l2s, 2.0 * l[1] * l[2]).acos();
    let a2 = triangle_cosine(l2s - l0s - l1s, 2.0 * l[0] * l[1]).acos();
    let mut best = f64::INFINITY;
    for signs in itertools::repeat_n([1.0, -1.0], 4).multi_cartesian_product() {
        let phases = D3Phases {
            xi0: signs[0] * a0,
            xi1: signs[1] * a1,
            eta0: signs[2] * a2,
            eta1: signs[3] * a1,
        };
        let r = unitarity_residual(&phases.unitary(p.q()));
        if r < DEFAULT_TOL {
            return Ok(phases);
        }
        best = best.min(r);
    }
    Err(MebError::NoUnitaryBranch(best))
}

/// A unitary with `|U_kl|² = q_{(k+l) mod 3}`.
pub fn base_unitary_d3(p: &ProbDist) -> MebResult<CMatrix> {
    Ok(d3_phases(p)?.unitary(p.q()))
}

fn phase_diag(pair: (f64, f64)) -> CMatrix {
    CMatrix::diag(&[c(1.0, 0.0), cis(pair.0), cis(pair.1)])
}

/// Four qutrit bases `{I, U, D_α U, D_β U}` at index `μ`.
pub fn build_d3(mu: f64, order: QOrder, pairs: PairChoice) -> MebResult<MebSet> {
    let triple = q_of_mu(mu)?;
    let theta = theta_of_mu(mu)?;
    let dist = ProbDist::new(order.apply(triple).to_vec())?;
    let u = base_unitary_d3(&dist)?;
    let (alpha, beta) = pairs.phase_pairs(theta);
    let v = matmul(&phase_diag(alpha), &u)?;
    let w = matmul(&phase_diag(beta), &u)?;
    Ok(MebSet {
        d: 3,
        dist,
        bases: vec![CMatrix::identity(3), u, v, w],
        meta: MebMeta { phase_case: Some(pairs.to_string()), q_order: Some(order.to_string()) },
    })
}

// ---------------------------------------------------------- verification

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub alpha: usize,
    pub beta: usize,
    /// Best permutation, `sigma[k] = σ(k)`.
    pub sigma: Vec<usize>,
    pub residual: f64,
    /// Cyclic shift `c` with `T_kl = q_{k+l+c}` when one fits within tolerance.
    pub shift: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MebReport {
    pub tol: f64,
    pub pass: bool,
    pub max_residual: f64,
    /// Worst deviation of `|U†U|²` from `δ_kl` over all bases.
    pub same_basis_residual: f64,
    pub pairs: Vec<PairReport>,
}

impl MebReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn pattern_residual(t: &[Vec<f64>], q: &[f64], index: impl Fn(usize, usize) -> usize) -> f64 {
    let d = q.len();
    let mut worst = 0.0f64;
    for k in 0..d {
        for l in 0..d {
            worst = worst.max((t[k][l] - q[index(k, l)]).abs());
        }
    }
    worst
}

/// Best cyclic shift `c` for `T_kl ≈ q_{(k+l+c) mod d}` and its residual.
pub fn circulant_shift(t: &[Vec<f64>], q: &[f64]) -> (usize, f64) {
    let d = q.len();
    (0..d)
        .map(|shift| (shift, pattern_residual(t, q, |k, l| (k + l + shift) % d)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

/// Residual of `|X†Y|²` against the circulant pattern with the given shift.
pub fn shift_residual(set: &MebSet, x: usize, y: usize, shift: usize) -> f64 {
    let d = set.d;
    pattern_residual(&set.transitions(x, y), set.dist.q(), |k, l| (k + l + shift) % d)
}

/// Checks every pair against the equi-biasedness condition, searching all
/// `d!` permutations (identity only when a member is the standard basis).
pub fn verify_meb(set: &MebSet, tol: f64) -> MebResult<MebReport> {
    let d = set.d;
    if d > MAX_VERIFY_DIM {
        return Err(MebError::UnsupportedDimension(d, "verify_meb permutation search"));
    }
    if set.dist.d() != d {
        return Err(MebError::DimensionMismatch(format!("q has {} entries, d = {d}", set.dist.d())));
    }
    if let Some(b) = set.bases.iter().find(|b| b.rows() != d || b.cols() != d) {
        return Err(MebError::DimensionMismatch(format!("basis of shape {}x{}", b.rows(), b.cols())));
    }
    let q = set.dist.q();
    let identity: Vec<usize> = (0..d).collect();
    let standard: Vec<bool> = set
        .bases
        .iter()
        .map(|b| b.max_abs_diff(&CMatrix::identity(d)) <= tol)
        .collect();

    let mut same_basis_residual = 0.0f64;
    for alpha in 0..set.len() {
        for (k, row) in set.transitions(alpha, alpha).iter().enumerate() {
            for (l, &x) in row.iter().enumerate() {
                let target = if k == l { 1.0 } else { 0.0 };
                same_basis_residual = same_basis_residual.max((x - target).abs());
            }
        }
    }

    let mut pairs = Vec::new();
    for alpha in 0..set.len() {
        for beta in (alpha + 1)..set.len() {
            let t = set.transitions(alpha, beta);
            let candidates: Vec<Vec<usize>> = if standard[alpha] || standard[beta] {
                vec![identity.clone()]
            } else {
                (0..d).permutations(d).collect()
            };
            let (sigma, residual) = candidates
                .into_iter()
                .map(|s| {
                    let r = pattern_residual(&t, q, |k, l| (s[k] + s[l]) % d);
                    (s, r)
                })
                .fold((identity.clone(), f64::INFINITY), |best, cur| {
                    if cur.1 < best.1 {
                        cur
                    } else {
                        best
                    }
                });
            let (c, cr) = circulant_shift(&t, q);
            pairs.push(PairReport {
                alpha,
                beta,
                sigma,
                residual,
                shift: (cr <= tol).then_some(c),
            });
        }
    }
    let max_residual = pairs.iter().map(|p| p.residual).fold(same_basis_residual, f64::max);
    Ok(MebReport { tol, pass: max_residual <= tol, max_residual, same_basis_residual, pairs })
}

/// Checks that `set` (built by [`build_d3`]) generates the cyclic patterns
/// listed for `(order, pairs)`; returns the residuals for `V†U`, `W†U`, `W†V`.
pub fn shift_table_residuals(set: &MebSet, order: QOrder, pairs: PairChoice) -> [f64; 3] {
    let expected = shift_table(order, pairs);
    [
        shift_residual(set, 2, 1, expected[0]),
        shift_residual(set, 3, 1, expected[1]),
        shift_residual(set, 3, 2, expected[2]),
    ]
}

/// The Fourier matrix, `F_kl = ω^{kl}/√d`.
pub fn fourier(d: usize) -> CMatrix {
    let norm = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |k, l| cis(TAU * ((k * l) % d) as f64 / d as f64) * norm)
}

/// True when every basis is unitary within `tol`.
pub fn all_unitary(set: &MebSet, tol: f64) -> bool {
    set.bases.iter().all(|b| is_unitary(b, tol))
}
