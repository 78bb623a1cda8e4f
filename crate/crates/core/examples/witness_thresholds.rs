//! Isotropic-state detection thresholds `1/(Lγ)` of the qutrit witness
//! along μ, next to the constant mutually unbiased reference `1/L`.

use mebkit::witness::{mu_grid, threshold_curve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = mu_grid(11);
    let curves: Vec<_> = (2..=4).map(|l| threshold_curve(3, l, &grid)).collect::<Result<_, _>>()?;
    println!("{:>8} {:>10} {:>10} {:>10}", "mu", "L=2", "L=3", "L=4");
    for (i, mu) in grid.iter().enumerate() {
        println!(
            "{mu:>8.4} {:>10.5} {:>10.5} {:>10.5}",
            curves[0][i].threshold_meb, curves[1][i].threshold_meb, curves[2][i].threshold_meb
        );
    }
    let refs: Vec<f64> = curves.iter().map(|c| c[0].threshold_mub).collect();
    println!("{:>8} {:>10.5} {:>10.5} {:>10.5}", "1/L", refs[0], refs[1], refs[2]);
    Ok(())
}
