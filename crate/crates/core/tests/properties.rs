use mebkit::distributions::{circulant_q, from_deltas, n_abs, n_submatrix, to_deltas, ProbDist};
use mebkit::io::fmt_num;
use mebkit::linalg::{
    bistochastic_defect, c, hermitian_eigenvalues, is_unitary, kron, matmul, unistochastic_of, CMatrix,
};
use mebkit::meb::{build_d2, build_d3, q_of_mu, verify_meb, PairChoice, QOrder};
use mebkit::random::{random_density_hs, random_pure_vector, random_rotation_fixing_axis, sample_rng};
use mebkit::uncertainty::{
    entropy_bound, f_factor, gram_eigenvalues_closed, gram_matrix, measurement_probs, omega_norm_sqr,
    omega_vector, prob_square_bound, DensityMatrix, LogBase,
};
use mebkit::witness::{gamma_factor, positive_map_apply, RotationSet};
use proptest::prelude::*;

fn dist(d: usize) -> impl Strategy<Value = ProbDist> {
    prop::collection::vec(0.01f64..1.0, d).prop_map(|w| {
        let s: f64 = w.iter().sum();
        ProbDist::new(w.into_iter().map(|x| x / s).collect()).unwrap()
    })
}

fn dist_any() -> impl Strategy<Value = ProbDist> {
    (2usize..=6).prop_flat_map(dist)
}

fn random_complex(n: usize, seed: u64) -> CMatrix {
    let mut rng = sample_rng(seed, 0);
    let v: Vec<_> = (0..n).flat_map(|_| random_pure_vector(n, &mut rng)).collect();
    CMatrix::new(n, n, v).unwrap()
}

fn qorder() -> impl Strategy<Value = QOrder> {
    prop::sample::select(QOrder::ALL.to_vec())
}

fn pairs() -> impl Strategy<Value = PairChoice> {
    prop::sample::select(PairChoice::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let (a, b) = (random_complex(n, seed), random_complex(m, seed ^ 1));
        let (cc, dd) = (random_complex(n, seed ^ 2), random_complex(m, seed ^ 3));
        let lhs = matmul(&kron(&a, &b), &kron(&cc, &dd)).unwrap();
        let rhs = kron(&matmul(&a, &cc).unwrap(), &matmul(&b, &dd).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), n in 1usize..7) {
        let a = random_complex(n, seed);
        let h = a.add(&a.dagger()).unwrap();
        let spectrum = hermitian_eigenvalues(&h, 1e-10).unwrap();
        prop_assert!((spectrum.sum() - h.trace().re).abs() < 1e-10 * n as f64);
    }

    #[test]
    fn unitary_gives_bistochastic(seed in any::<u64>(), n in 1usize..7) {
        let q = random_complex(n, seed).into_inner().qr().q();
        let u = CMatrix::from_inner(q);
        prop_assert!(is_unitary(&u, 1e-10));
        prop_assert!(bistochastic_defect(&unistochastic_of(&u)) < 1e-12);
    }

    #[test]
    fn n_submatrix_moduli_match_n_abs(p in dist_any()) {
        let n = n_submatrix(&p);
        let d = p.d();
        for i in 0..d - 1 {
            let entry = n.get(i, d - 2 - i).norm();
            let k = (i + 1).min(d - 1 - i);
            prop_assert!((entry - n_abs(&p, k).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn circulant_is_bistochastic_and_cyclic(p in dist_any(), shift in 0usize..6) {
        let d = p.d();
        let shift = shift % d;
        let m = circulant_q(&p);
        prop_assert!(bistochastic_defect(&m) < 1e-12);
        for r in 0..d {
            for col in 0..d {
                prop_assert_eq!(m[((r + shift) % d, (col + d - shift) % d)], m[(r, col)]);
                prop_assert_eq!(m[(col, r)], m[(r, col)]);
            }
        }
    }

    #[test]
    fn deltas_round_trip(p in (2usize..=4).prop_flat_map(dist)) {
        let back = from_deltas(&to_deltas(&p).unwrap()).unwrap();
        for (x, y) in back.q().iter().zip(p.q()) {
            prop_assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn q_of_mu_is_consistent(mu in (1.0f64 / 3.0)..=0.5) {
        let (plus, zero, minus) = q_of_mu(mu).unwrap();
        prop_assert!((plus + zero + minus - 1.0).abs() < 1e-12);
        prop_assert!((plus * plus + zero * zero + minus * minus - mu).abs() < 1e-12);
        prop_assert!(plus >= zero && zero >= minus && minus >= 0.0);
    }

    #[test]
    fn constructed_d3_sets_verify(mu in (1.0f64 / 3.0)..=0.5, order in qorder(), pair in pairs()) {
        let set = build_d3(mu, order, pair).unwrap();
        prop_assert!(set.bases.iter().all(|u| is_unitary(u, 1e-10)));
        let report = verify_meb(&set, 1e-9).unwrap();
        prop_assert!(report.pass, "max residual {}", report.max_residual);
        for pr in &report.pairs {
            let s = &pr.sigma;
            let cyclic = (0..3).all(|k| s[k] == (k + s[0]) % 3);
            prop_assert!(cyclic, "sigma {:?}", s);
        }
    }

    #[test]
    fn constructed_d2_sets_verify(delta in 0.0f64..0.999) {
        let report = verify_meb(&build_d2(delta).unwrap(), 1e-10).unwrap();
        prop_assert!(report.pass);
    }

    #[test]
    fn closed_gram_spectrum_matches_numeric(p in dist_any(), extra in 0usize..6) {
        let d = p.d();
        let l = 2 + extra % d;
        let closed = gram_eigenvalues_closed(&p, l).unwrap();
        let numeric = gram_matrix(&p, l).eigenvalues().unwrap();
        prop_assert!(closed.max_deviation(&numeric) < 1e-9);
        if closed.min() >= 0.0 && (d % 2 == 1 || (0..d).map(|m| if m % 2 == 0 { p.q()[m] } else { -p.q()[m] }).sum::<f64>() >= 0.0) {
            prop_assert!((closed.max() - f_factor(&p, l)).abs() < 1e-12);
        } else {
            prop_assert!(closed.max() <= f_factor(&p, l) + 1e-12);
        }
    }

    #[test]
    fn random_states_are_valid(seed in any::<u64>(), d in 1usize..7) {
        let rho = random_density_hs(d, &mut sample_rng(seed, 0));
        prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        prop_assert!(rho.purity() <= 1.0 + 1e-12 && rho.purity() >= 1.0 / d as f64 - 1e-12);
    }

    #[test]
    fn bounds_hold_on_d3_sets(mu in (1.0f64 / 3.0)..=0.5, order in qorder(), pair in pairs(), seed in any::<u64>()) {
        let set = build_d3(mu, order, pair).unwrap();
        let rho = random_density_hs(3, &mut sample_rng(seed, 0));
        let b = prob_square_bound(&rho, &set).unwrap();
        prop_assert!(b.lhs <= b.rhs + 1e-10);
        let e = entropy_bound(&rho, &set, LogBase::Nats).unwrap();
        prop_assert!(e.entropy_sum >= e.lower_bound - 1e-10);
        let pt = measurement_probs(&rho, &set).unwrap();
        let (d, l) = (3.0, set.len() as f64);
        let expected = pt.sum_of_squares() / d - l / (d * d);
        prop_assert!((omega_norm_sqr(&omega_vector(&pt)) - expected).abs() < 1e-12);
    }

    #[test]
    fn positive_map_preserves_trace(delta in 0.0f64..0.99, seed in any::<u64>()) {
        let set = build_d2(delta).unwrap();
        let gamma = gamma_factor(&set.dist, set.len()).unwrap();
        let x = random_complex(2, seed);
        let rot = RotationSet::identity(2, set.len());
        let y = positive_map_apply(&x, &set, &rot, gamma).unwrap();
        prop_assert!((y.trace() - x.trace()).norm() < 1e-10);
    }

    #[test]
    fn rotated_map_stays_positive(mu in (1.0f64 / 3.0)..=0.5, seed in any::<u64>()) {
        let set = build_d3(mu, QOrder::ALL[0], PairChoice::AB).unwrap();
        let mut rng = sample_rng(seed, 0);
        let rotations = (0..set.len()).map(|_| random_rotation_fixing_axis(3, &mut rng)).collect();
        let rot = RotationSet::new(rotations).unwrap();
        let gamma = gamma_factor(&set.dist, set.len()).unwrap();
        let psi = random_pure_vector(3, &mut rng);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let out = positive_map_apply(rho.matrix(), &set, &rot, gamma).unwrap();
        prop_assert!(hermitian_eigenvalues(&out, 1e-10).unwrap().min() >= -1e-9);
    }

    #[test]
    fn csv_numbers_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let parsed: f64 = fmt_num(x).parse().unwrap();
        prop_assert_eq!(parsed.to_bits(), x.to_bits());
    }
}

#[test]
fn maximally_mixed_state_is_valid() {
    for d in 1..7 {
        let rho = DensityMatrix::maximally_mixed(d);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }
    let bad = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(DensityMatrix::new(bad.scale(c(2.0, 0.0))).is_err());
}
