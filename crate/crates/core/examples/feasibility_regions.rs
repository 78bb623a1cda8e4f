//! Scans the qutrit probability simplex in the `(δ₂, δ₁)` plane and counts
//! how much of it survives each successive feasibility condition.

use mebkit::distributions::{classify, scan_feasibility, ScanGrid};
use mebkit::io::csv_string;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = scan_feasibility(&ScanGrid::full(200))?;
    let counts = grid.counts();
    let inside = counts.inside as f64;
    println!("cells inside simplex: {}", counts.inside);
    for (label, n) in [
        ("triangle inequalities", counts.panel_a),
        ("  and mu <= 5/9", counts.panel_b),
        ("  and chain links", counts.panel_c),
        ("  and mu <= 1/2", counts.panel_d),
    ] {
        println!("{label:<24} {n:>7}  ({:.1}%)", 100.0 * n as f64 / inside);
    }

    let corner = classify(0.0, 1.0);
    let centre = classify(0.0, 0.0);
    println!("\nvertex q=(1,0,0): {corner:?}");
    println!("uniform point:    {centre:?}");

    let coarse = scan_feasibility(&ScanGrid::full(4))?;
    print!("\n{}", csv_string(&coarse.cells));
    Ok(())
}
