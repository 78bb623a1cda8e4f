use mebkit::meb::{build_d3, PairChoice, QOrder};
use mebkit::random::{random_density_hs, random_pure_state, sample_rng};
use mebkit::uncertainty::{DensityMatrix, PurityDecomposition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for mu in [1.0 / 3.0, 0.36, 0.4, 0.45, 0.49, 0.5] {
        let set = build_d3(mu, QOrder::ALL[0], PairChoice::AB)?;
        let decomposition = match PurityDecomposition::new(&set) {
            Ok(dec) => dec,
            Err(e) => {
                println!("mu={mu:.4}  {e}");
                continue;
            }
        };
        let flat = decomposition.residual(&DensityMatrix::maximally_mixed(3), &set)?;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..500 {
            let mut rng = sample_rng(7, i);
            let rho = if i % 2 == 0 { random_density_hs(3, &mut rng) } else { random_pure_state(3, &mut rng) };
            let r = decomposition.residual(&rho, &set)?;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        println!(
            "mu={mu:.4}  lambda_min(G)={:.3e}  residual(I/3)={flat:.1e}  residual range [{lo:.2e}, {hi:.2e}]",
            decomposition.min_eigenvalue()
        );
    }
    Ok(())
}
