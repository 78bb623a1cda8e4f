//! Three equi-biased qubit bases for a range of biases, with the Bloch
//! vector geometry behind them.

use mebkit::meb::{bloch_dots_d2, build_d2, d2_phase, verify_meb};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>10} {:>12} {:>12}", "delta", "alpha", "residual", "max|dot|");
    for i in 0..=9 {
        let delta = i as f64 / 10.0;
        let set = build_d2(delta)?;
        let report = verify_meb(&set, 1e-10)?;
        let dots = bloch_dots_d2(&set)?;
        let worst = dots.iter().map(|b| b.dot.abs()).fold(0.0, f64::max);
        println!("{delta:>6.2} {:>10.6} {:>12.3e} {worst:>12.6}", d2_phase(delta), report.max_residual);
    }

    // transition table between the second and third basis at delta = 0.6
    let set = build_d2(0.6)?;
    for row in set.transitions(1, 2) {
        println!("{:?}", row.iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>());
    }
    Ok(())
}
