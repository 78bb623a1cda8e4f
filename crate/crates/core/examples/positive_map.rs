//! The positive map built from a qutrit set, its witness, and how the
//! witness scores isotropic and random product states.

use mebkit::meb::{build_d3, PairChoice, QOrder};
use mebkit::random::{random_pure_vector, random_rotation_fixing_axis, sample_rng};
use mebkit::uncertainty::DensityMatrix;
use mebkit::witness::{
    gamma_factor, isotropic_state, isotropic_witness_value, mehta_margin, min_eigenvalue, positive_map_apply,
    witness_operator, RotationSet, WitnessVariant,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let set = build_d3(0.42, QOrder::ALL[0], PairChoice::AB)?;
    let l = set.len();
    let gamma = gamma_factor(&set.dist, l)?;
    println!("mu=0.42 L={l} gamma={gamma:.6} threshold={:.6}", 1.0 / (l as f64 * gamma));

    let mut rng = sample_rng(11, 0);
    let rotations = (0..l).map(|_| random_rotation_fixing_axis(3, &mut rng)).collect();
    let rot = RotationSet::new(rotations)?;
    let mut worst_eig = f64::INFINITY;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..2000 {
        let rho = DensityMatrix::pure(&random_pure_vector(3, &mut rng))?;
        let image = positive_map_apply(rho.matrix(), &set, &rot, gamma)?;
        worst_eig = worst_eig.min(min_eigenvalue(&image)?);
        worst_margin = worst_margin.min(mehta_margin(&image)?);
    }
    println!("rotated map on 2000 pure states: min eigenvalue {worst_eig:.3e}, min trace margin {worst_margin:.3e}");

    let w = witness_operator(&set, &RotationSet::identity(3, l), WitnessVariant::Meb)?;
    println!("\n{:>6} {:>12} {:>12}", "omega", "Tr[rho W]", "closed form");
    for i in 0..=10 {
        let omega = i as f64 / 10.0;
        let value = w.expectation(&isotropic_state(3, omega)?)?;
        println!("{omega:>6.1} {value:>12.6} {:>12.6}", isotropic_witness_value(3, l, gamma, omega));
    }

    let mut lowest = f64::INFINITY;
    for _ in 0..5000 {
        let a = random_pure_vector(3, &mut rng);
        let b = random_pure_vector(3, &mut rng);
        lowest = lowest.min(w.product_expectation(&a, &b));
    }
    let trace = w.matrix.trace().re;
    println!("\nmin over 5000 product states {lowest:.3e}; Tr W = {trace:.6}");
    Ok(())
}
