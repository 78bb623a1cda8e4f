//! Minimum of the summed phase constraint residual over the `(α₁, α₂)` torus.
//! A zero crossing exists only while μ ≤ 5/9.

use mebkit::distributions::alpha_constraint_grid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let res = (2.0 * std::f64::consts::PI / 0.01).ceil() as usize;
    for mu in [1.0 / 3.0, 0.4, 0.5, 0.55, 5.0 / 9.0, 0.6, 0.8] {
        let grid = alpha_constraint_grid(mu, res)?;
        let zero = grid.points.iter().filter(|p| p.residual.abs() < 1e-2).count();
        println!("mu = {mu:.4}  min|residual| = {:.2e}  cells near zero = {zero}", grid.min_abs_residual());
    }
    Ok(())
}
