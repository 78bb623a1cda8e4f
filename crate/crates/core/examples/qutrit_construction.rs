//! Builds the four qutrit bases at μ = 1/2 with the nonincreasing ordering
//! and prints the base unitary, its phases, and which cyclic shift of `q`
//! each pair of bases realises.

use mebkit::meb::{build_d3, d3_phases, shift_table, shift_table_residuals, PairChoice, QOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let order: QOrder = "+0-".parse()?;
    let set = build_d3(0.5, order, PairChoice::AB)?;
    println!("q = {:?}", set.dist.q());

    let phases = d3_phases(&set.dist)?;
    println!(
        "xi0 = {:.6}, xi1 = {:.6}, eta0 = {:.6}, eta1 = {:.6}",
        phases.xi0, phases.xi1, phases.eta0, phases.eta1
    );

    for (name, u) in ["I", "U", "V", "W"].iter().zip(&set.bases) {
        println!("{name}:");
        for r in 0..3 {
            let row: Vec<String> = (0..3).map(|c| format!("{:>8.4}", u.get(r, c))).collect();
            println!("  {}", row.join(" "));
        }
    }

    println!("\nshifts c with T_kl = q_(k+l+c) for V†U, W†U, W†V:");
    for order in QOrder::ALL {
        let row: Vec<String> = PairChoice::ALL
            .iter()
            .map(|&p| {
                let set = build_d3(0.42, order, p).expect("mu in range");
                let worst = shift_table_residuals(&set, order, p).into_iter().fold(0.0, f64::max);
                format!("{p}: {:?} ({worst:.1e})", shift_table(order, p))
            })
            .collect();
        println!("  {order}  {}", row.join("  "));
    }
    Ok(())
}
