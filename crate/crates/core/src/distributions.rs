//! Probability distributions generating MEB families and the d=3
//! feasibility predicates (triangle, index cap, chain-link).

use std::f64::consts::{PI, TAU};

use itertools::Itertools;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MebError, MebResult};
use crate::io::{fmt_bool, fmt_num, CsvRecord};
use crate::linalg::{CMatrix, RMatrix};

/// Boundary tolerance used by every feasibility inequality.
pub const BOUNDARY_EPS: f64 = 1e-12;

const SUM_TOL: f64 = 1e-12;

/// A d-outcome probability vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbDist {
    q: Vec<f64>,
}

impl ProbDist {
    /// Validates and wraps `q`. Entries within `1e-12` below zero are
    /// clamped to zero; anything else negative is rejected.
    pub fn new(q: Vec<f64>) -> MebResult<Self> {
        if q.len() < 2 {
            return Err(MebError::InvalidDistribution(format!("need d >= 2, got {}", q.len())));
        }
        let mut q = q;
        for x in q.iter_mut() {
            if !x.is_finite() || *x < -SUM_TOL || *x > 1.0 + SUM_TOL {
                return Err(MebError::InvalidDistribution(format!("entry {x} outside [0,1]")));
            }
            *x = x.clamp(0.0, 1.0);
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(MebError::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { q })
    }

    pub fn uniform(d: usize) -> Self {
        Self { q: vec![1.0 / d as f64; d] }
    }

    pub fn d(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Index of coincidence `Σ q_k²`.
    pub fn mu(&self) -> f64 {
        index_mu(self)
    }

    pub fn q_max(&self) -> f64 {
        self.q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Cyclic relabelling `q'_k = q_{k+shift}`.
    pub fn cyclic(&self, shift: usize) -> Self {
        let d = self.d();
        Self { q: (0..d).map(|k| self.q[(k + shift) % d]).collect() }
    }
}

pub fn index_mu(p: &ProbDist) -> f64 {
    p.q.iter().map(|x| x * x).sum()
}

/// `Q_kl = q_{(k+l) mod d}`.
pub fn circulant_q(p: &ProbDist) -> RMatrix {
    let d = p.d();
    RMatrix::from_fn(d, d, |k, l| p.q[(k + l) % d])
}

/// Linear coordinates of a distribution for d ∈ {2,3,4}.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaParams {
    pub d: usize,
    pub deltas: Vec<f64>,
}

pub fn to_deltas(p: &ProbDist) -> MebResult<DeltaParams> {
    let q = p.q();
    let deltas = match p.d() {
        2 => vec![q[0] - q[1]],
        3 => vec![(3.0 * q[0] - 1.0) / 2.0, 3f64.sqrt() * (q[2] - q[1]) / 2.0],
        4 => vec![q[0] - q[2], q[3] - q[1], q[0] - q[1] + q[2] - q[3]],
        d => return Err(MebError::UnsupportedDimension(d, "delta parametrization")),
    };
    Ok(DeltaParams { d: p.d(), deltas })
}

pub fn from_deltas(dp: &DeltaParams) -> MebResult<ProbDist> {
    let expected = dp.d.saturating_sub(1);
    if dp.deltas.len() != expected {
        return Err(MebError::DimensionMismatch(format!(
            "d={} needs {expected} deltas, got {}",
            dp.d,
            dp.deltas.len()
        )));
    }
    let s = &dp.deltas;
    let q = match dp.d {
        2 => vec![(1.0 + s[0]) / 2.0, (1.0 - s[0]) / 2.0],
        3 => {
            let r3 = 3f64.sqrt();
            vec![
                1.0 / 3.0 + 2.0 * s[0] / 3.0,
                1.0 / 3.0 - s[0] / 3.0 - s[1] / r3,
                1.0 / 3.0 - s[0] / 3.0 + s[1] / r3,
            ]
        }
        4 => vec![
            0.25 + s[0] / 2.0 + s[2] / 4.0,
            0.25 - s[1] / 2.0 - s[2] / 4.0,
            0.25 - s[0] / 2.0 + s[2] / 4.0,
            0.25 + s[1] / 2.0 - s[2] / 4.0,
        ],
        d => return Err(MebError::UnsupportedDimension(d, "delta parametrization")),
    };
    if let Some(bad) = q.iter().find(|x| **x < -SUM_TOL) {
        return Err(MebError::OutOfRange {
            name: "deltas",
            range: "the admissible box (a probability became negative)",
            value: *bad,
        });
    }
    ProbDist::new(q)
}

fn omega_pow(d: usize, e: usize) -> C64 {
    C64::from_polar(1.0, TAU * (e % d) as f64 / d as f64)
}

/// The anti-diagonal `(d−1)×(d−1)` overlap block; row/column `i` stands
/// for index `k = i + 1`.
pub fn n_submatrix(p: &ProbDist) -> CMatrix {
    let d = p.d();
    CMatrix::from_fn(d - 1, d - 1, |i, j| {
        let (k, kp) = (i + 1, j + 1);
        if k + kp == d {
            (0..d).map(|m| omega_pow(d, kp * m) * p.q[m]).sum()
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `|N_{k,d−k}| = |Σ_m ω^{km} q_m|`, for `1 ≤ k ≤ ⌊d/2⌋`.
pub fn n_abs(p: &ProbDist, k: usize) -> MebResult<f64> {
    let d = p.d();
    if k < 1 || k > d / 2 {
        return Err(MebError::OutOfRange {
            name: "k",
            range: "1..=floor(d/2)",
            value: k as f64,
        });
    }
    let s: C64 = (0..d).map(|m| omega_pow(d, k * m) * p.q[m]).sum();
    Ok(s.norm())
}

fn require_d3(p: &ProbDist, what: &'static str) -> MebResult<()> {
    if p.d() != 3 {
        return Err(MebError::UnsupportedDimension(p.d(), what));
    }
    Ok(())
}

/// Segment lengths `L_0 = √(q1 q2)`, `L_1 = √(q2 q0)`, `L_2 = √(q0 q1)`.
pub fn segments(q: &[f64]) -> [f64; 3] {
    [(q[1] * q[2]).sqrt(), (q[2] * q[0]).sqrt(), (q[0] * q[1]).sqrt()]
}

/// Whether the three segments close into a (possibly degenerate) triangle.
pub fn triangle_feasible(p: &ProbDist) -> MebResult<bool> {
    require_d3(p, "triangle_feasible")?;
    let l = segments(p.q());
    Ok([(0, 1, 2), (1, 2, 0), (2, 0, 1)].iter().all(|&(i, j, k)| {
        (l[j] - l[k]).abs() <= l[i] + BOUNDARY_EPS && l[i] <= l[j] + l[k] + BOUNDARY_EPS
    }))
}

/// The six conditions `q_i ≤ q_j + q_k + √q_j` over distinct `(i, j, k)`.
pub fn chain_link_feasible(p: &ProbDist) -> MebResult<bool> {
    require_d3(p, "chain_link_feasible")?;
    let q = p.q();
    Ok((0..3)
        .permutations(3)
        .all(|ijk| q[ijk[0]] <= q[ijk[1]] + q[ijk[2]] + q[ijk[1]].sqrt() + BOUNDARY_EPS))
}

/// Rectangular scan over `(δ₂, δ₁)` with cell-centre sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanGrid {
    pub delta2_range: (f64, f64),
    pub delta1_range: (f64, f64),
    pub res_delta2: usize,
    pub res_delta1: usize,
}

impl ScanGrid {
    /// The full bounding box of the simplex at `res × res`.
    pub fn full(res: usize) -> Self {
        let h = 3f64.sqrt() / 2.0;
        Self { delta2_range: (-h, h), delta1_range: (-0.5, 1.0), res_delta2: res, res_delta1: res }
    }

    fn validate(&self) -> MebResult<()> {
        if self.res_delta1 == 0 || self.res_delta2 == 0 {
            return Err(MebError::EmptyGrid);
        }
        let h = 3f64.sqrt() / 2.0 + BOUNDARY_EPS;
        let (a, b) = self.delta1_range;
        let (c, e) = self.delta2_range;
        if a.is_nan() || b.is_nan() || a >= b || a < -0.5 - BOUNDARY_EPS || b > 1.0 + BOUNDARY_EPS {
            return Err(MebError::OutOfRange { name: "delta1 range", range: "[-1/2, 1]", value: a });
        }
        if c.is_nan() || e.is_nan() || c >= e || c < -h || e > h {
            return Err(MebError::OutOfRange {
                name: "delta2 range",
                range: "[-sqrt(3)/2, sqrt(3)/2]",
                value: c,
            });
        }
        Ok(())
    }
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self::full(400)
    }
}

/// One cell of a feasibility scan. All flags are false outside the simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FeasibilityCell {
    pub delta2: f64,
    pub delta1: f64,
    pub inside: bool,
    pub triangle: bool,
    pub mu59: bool,
    pub chain: bool,
    pub mu12: bool,
}

impl CsvRecord for FeasibilityCell {
    fn header() -> &'static str {
        "delta2,delta1,triangle,mu59,chain,mu12"
    }

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_num(self.delta2),
            fmt_num(self.delta1),
            fmt_bool(self.triangle).into(),
            fmt_bool(self.mu59).into(),
            fmt_bool(self.chain).into(),
            fmt_bool(self.mu12).into(),
        ]
    }
}

/// Per-flag and cumulative counts of a feasibility scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RegionCounts {
    pub inside: usize,
    pub triangle: usize,
    pub mu59: usize,
    pub chain: usize,
    pub mu12: usize,
    /// triangle
    pub panel_a: usize,
    /// triangle ∧ μ ≤ 5/9
    pub panel_b: usize,
    /// … ∧ chain-link
    pub panel_c: usize,
    /// … ∧ μ ≤ 1/2
    pub panel_d: usize,
}

#[derive(Clone, Debug)]
pub struct FeasibilityGrid {
    pub layout: ScanGrid,
    /// Row-major with δ₁ as the slow axis.
    pub cells: Vec<FeasibilityCell>,
}

impl FeasibilityGrid {
    pub fn counts(&self) -> RegionCounts {
        let mut c = RegionCounts::default();
        for cell in &self.cells {
            c.inside += cell.inside as usize;
            c.triangle += cell.triangle as usize;
            c.mu59 += cell.mu59 as usize;
            c.chain += cell.chain as usize;
            c.mu12 += cell.mu12 as usize;
            let a = cell.triangle;
            let b = a && cell.mu59;
            let cc = b && cell.chain;
            let d = cc && cell.mu12;
            c.panel_a += a as usize;
            c.panel_b += b as usize;
            c.panel_c += cc as usize;
            c.panel_d += d as usize;
        }
        c
    }

    /// The cell whose extent contains `(delta2, delta1)`.
    pub fn cell_at(&self, delta2: f64, delta1: f64) -> Option<&FeasibilityCell> {
        let s = &self.layout;
        let fx = (delta2 - s.delta2_range.0) / (s.delta2_range.1 - s.delta2_range.0);
        let fy = (delta1 - s.delta1_range.0) / (s.delta1_range.1 - s.delta1_range.0);
        if !(0.0..=1.0).contains(&fx) || !(0.0..=1.0).contains(&fy) {
            return None;
        }
        let j = ((fx * s.res_delta2 as f64) as usize).min(s.res_delta2 - 1);
        let i = ((fy * s.res_delta1 as f64) as usize).min(s.res_delta1 - 1);
        self.cells.get(i * s.res_delta2 + j)
    }
}

fn centre(range: (f64, f64), n: usize, i: usize) -> f64 {
    range.0 + (range.1 - range.0) * (i as f64 + 0.5) / n as f64
}

/// Evaluates the four flags at one point of the `(δ₂, δ₁)` plane.
pub fn classify(delta2: f64, delta1: f64) -> FeasibilityCell {
    let dp = DeltaParams { d: 3, deltas: vec![delta1, delta2] };
    let mut cell = FeasibilityCell {
        delta2,
        delta1,
        inside: false,
        triangle: false,
        mu59: false,
        chain: false,
        mu12: false,
    };
    if let Ok(p) = from_deltas(&dp) {
        let mu = p.mu();
        cell.inside = true;
        cell.triangle = triangle_feasible(&p).unwrap_or(false);
        cell.mu59 = mu <= 5.0 / 9.0 + BOUNDARY_EPS;
        cell.chain = chain_link_feasible(&p).unwrap_or(false);
        cell.mu12 = mu <= 0.5 + BOUNDARY_EPS;
    }
    cell
}

pub fn scan_feasibility(layout: &ScanGrid) -> MebResult<FeasibilityGrid> {
    layout.validate()?;
    let cells: Vec<FeasibilityCell> = (0..layout.res_delta1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let d1 = centre(layout.delta1_range, layout.res_delta1, i);
            (0..layout.res_delta2).map(move |j| classify(centre(layout.delta2_range, layout.res_delta2, j), d1))
        })
        .collect();
    Ok(FeasibilityGrid { layout: layout.clone(), cells })
}

/// `cos α₁ + cos α₂ + cos(α₁−α₂) − (1−3μ)/(1−μ)`.
pub fn alpha_residual(mu: f64, alpha1: f64, alpha2: f64) -> f64 {
    alpha1.cos() + alpha2.cos() + (alpha1 - alpha2).cos() - (1.0 - 3.0 * mu) / (1.0 - mu)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub alpha1: f64,
    pub alpha2: f64,
    pub residual: f64,
}

impl CsvRecord for ResidualPoint {
    fn header() -> &'static str {
        "alpha1,alpha2,residual"
    }

    fn fields(&self) -> Vec<String> {
        vec![fmt_num(self.alpha1), fmt_num(self.alpha2), fmt_num(self.residual)]
    }
}

#[derive(Clone, Debug)]
pub struct ResidualGrid {
    pub mu: f64,
    pub res: usize,
    pub points: Vec<ResidualPoint>,
}

impl ResidualGrid {
    pub fn min_abs_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual.abs()).fold(f64::INFINITY, f64::min)
    }
}

/// Residual of the summed phase constraint over `(α₁, α₂) ∈ (−π, π)²`,
/// `res × res` cell centres, α₁ as the slow axis.
pub fn alpha_constraint_grid(mu: f64, res: usize) -> MebResult<ResidualGrid> {
    if !(1.0 / 3.0..1.0).contains(&mu) {
        return Err(MebError::OutOfRange { name: "mu", range: "[1/3, 1)", value: mu });
    }
    if res == 0 {
        return Err(MebError::EmptyGrid);
    }
    let range = (-PI, PI);
    let mut points = Vec::with_capacity(res * res);
    for i in 0..res {
        let a1 = centre(range, res, i);
        for j in 0..res {
            let a2 = centre(range, res, j);
            points.push(ResidualPoint { alpha1: a1, alpha2: a2, residual: alpha_residual(mu, a1, a2) });
        }
    }
    Ok(ResidualGrid { mu, res, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(q: &[f64]) -> ProbDist {
        ProbDist::new(q.to_vec()).unwrap()
    }

    fn mu_half() -> ProbDist {
        let r5 = 5f64.sqrt();
        pd(&[(3.0 + r5) / 8.0, 0.25, (3.0 - r5) / 8.0])
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![1.2, -0.2]).is_err());
        assert!(ProbDist::new(vec![1.0]).is_err());
    }

    #[test]
    fn coincidence_index() {
        assert!((index_mu(&ProbDist::uniform(3)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(index_mu(&pd(&[1.0, 0.0, 0.0])), 1.0);
        assert!((index_mu(&mu_half()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn circulant_rows() {
        let q = circulant_q(&pd(&[0.5, 0.3, 0.2]));
        assert_eq!(q.row(0).iter().copied().collect::<Vec<_>>(), vec![0.5, 0.3, 0.2]);
        assert_eq!(q.row(1).iter().copied().collect::<Vec<_>>(), vec![0.3, 0.2, 0.5]);
        assert_eq!(q.row(2).iter().copied().collect::<Vec<_>>(), vec![0.2, 0.5, 0.3]);
        let q2 = circulant_q(&pd(&[0.7, 0.3]));
        assert_eq!(q2, RMatrix::from_row_slice(2, 2, &[0.7, 0.3, 0.3, 0.7]));
        let u = circulant_q(&ProbDist::uniform(4));
        assert!(u.iter().all(|x| (x - 0.25).abs() < 1e-16));
    }

    #[test]
    fn deltas_at_uniform_centre() {
        assert!(to_deltas(&ProbDist::uniform(3)).unwrap().deltas.iter().all(|x| x.abs() < 1e-16));
        assert!(to_deltas(&ProbDist::uniform(4)).unwrap().deltas.iter().all(|x| x.abs() < 1e-16));
        assert!(to_deltas(&ProbDist::uniform(5)).is_err());
    }

    #[test]
    fn from_deltas_rejects_outside_box() {
        let dp = DeltaParams { d: 3, deltas: vec![1.2, 0.0] };
        assert!(matches!(from_deltas(&dp), Err(MebError::OutOfRange { .. })));
        let dp = DeltaParams { d: 2, deltas: vec![0.5, 0.1] };
        assert!(from_deltas(&dp).is_err());
    }

    #[test]
    fn n_submatrix_small_cases() {
        let p = pd(&[0.8, 0.2]);
        let n = n_submatrix(&p);
        assert!((n.get(0, 0).re - 0.6).abs() < 1e-15 && n.get(0, 0).im.abs() < 1e-15);

        let p = pd(&[0.5, 0.2, 0.3]);
        let n = n_submatrix(&p);
        let dl = to_deltas(&p).unwrap().deltas;
        assert!((n.get(0, 1) - C64::new(dl[0], dl[1])).norm() < 1e-15);
        assert!((n.get(1, 0) - C64::new(dl[0], -dl[1])).norm() < 1e-15);
        assert_eq!(n.get(0, 0), C64::new(0.0, 0.0));

        let z = n_submatrix(&ProbDist::uniform(5));
        assert!(z.max_abs_diff(&CMatrix::zeros(4, 4)) < 1e-15);
    }

    #[test]
    fn n_abs_values() {
        assert!((n_abs(&mu_half(), 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((n_abs(&pd(&[0.75, 0.25]), 1).unwrap() - 0.5).abs() < 1e-15);
        for d in 2..=6 {
            for k in 1..=d / 2 {
                assert!(n_abs(&ProbDist::uniform(d), k).unwrap() < 1e-15);
            }
        }
        // cosine-sum form |N_k|² = μ + 2 Σ_{m<m'} q_m q_m' cos(2πk(m−m')/d)
        let p = pd(&[0.1, 0.35, 0.05, 0.3, 0.2]);
        for k in 1..=2 {
            let mut acc = index_mu(&p);
            for m in 0..5 {
                for mp in (m + 1)..5 {
                    let angle = TAU * (k * (mp - m)) as f64 / 5.0;
                    acc += 2.0 * p.q()[m] * p.q()[mp] * angle.cos();
                }
            }
            assert!((n_abs(&p, k).unwrap() - acc.sqrt()).abs() < 1e-14);
        }
        assert!(n_abs(&ProbDist::uniform(3), 2).is_err());
        assert!(n_abs(&ProbDist::uniform(3), 0).is_err());
    }

    #[test]
    fn triangle_predicate() {
        assert!(triangle_feasible(&ProbDist::uniform(3)).unwrap());
        assert!(triangle_feasible(&pd(&[1.0, 0.0, 0.0])).unwrap());
        assert!(triangle_feasible(&ProbDist::uniform(2)).is_err());
        // L = (√(0.09·0.01), √(0.01·0.9), √(0.9·0.09)) = (0.03, 0.0948…, 0.2846…):
        // 0.2846 > 0.03 + 0.0949, so the triangle does not close.
        assert!(!triangle_feasible(&pd(&[0.9, 0.09, 0.01])).unwrap());
    }

    #[test]
    fn chain_link_predicate() {
        assert!(chain_link_feasible(&ProbDist::uniform(3)).unwrap());
        // i=0, j=2: 0.98 ≤ 0.005 + 0.015 + √0.005 = 0.0907… fails.
        assert!(!chain_link_feasible(&pd(&[0.98, 0.015, 0.005])).unwrap());
        assert!(chain_link_feasible(&mu_half()).unwrap());
    }

    #[test]
    fn grid_errors() {
        let mut g = ScanGrid::full(10);
        g.res_delta1 = 0;
        assert!(matches!(scan_feasibility(&g), Err(MebError::EmptyGrid)));
        let mut g = ScanGrid::full(10);
        g.delta1_range = (-1.0, 1.0);
        assert!(scan_feasibility(&g).is_err());
    }

    #[test]
    fn uniform_cell_has_all_flags() {
        let grid = scan_feasibility(&ScanGrid::full(40)).unwrap();
        let cell = grid.cell_at(0.0, 0.0).unwrap();
        assert!(cell.inside && cell.triangle && cell.mu59 && cell.chain && cell.mu12);
        let direct = classify(0.0, 0.0);
        assert!(direct.triangle && direct.mu59 && direct.chain && direct.mu12);
    }

    #[test]
    fn mu_just_above_five_ninths_fails_mu59() {
        // On the δ₂ = 0 axis μ = 1/3 + 2δ₁²/3, so δ₁ = √((3μ−1)/2).
        let d1 = ((3.0 * 0.56 - 1.0) / 2.0f64).sqrt();
        let cell = classify(0.0, d1);
        assert!(cell.inside && !cell.mu59 && !cell.mu12);
    }

    #[test]
    fn alpha_residual_reference_points() {
        let t = 2.0 * PI / 3.0;
        assert!((alpha_residual(1.0 / 3.0, t, -t) + 1.5).abs() < 1e-14);
        assert!(alpha_residual(0.5, PI, PI).abs() < 1e-14);
        assert!(alpha_residual(5.0 / 9.0, t, -t).abs() < 1e-14);
        assert!(alpha_constraint_grid(0.2, 10).is_err());
        assert!(alpha_constraint_grid(1.0, 10).is_err());
        assert!(alpha_constraint_grid(0.4, 0).is_err());
    }

    #[test]
    fn no_phase_solution_above_five_ninths() {
        let res = (TAU / 0.01).ceil() as usize;
        let g = alpha_constraint_grid(0.6, res).unwrap();
        assert!(g.min_abs_residual() > 0.0);
        let g = alpha_constraint_grid(0.45, res).unwrap();
        assert!(g.min_abs_residual() < 1e-2);
    }
}
