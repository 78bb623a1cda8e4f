//! Random-state sweeps of the probability-square and entropic bounds.
//!
//! Run with `MEBKIT_THREADS=1` to confirm the numbers do not depend on the
//! thread count.

use mebkit::meb::{build_d2, build_d3, MebSet, PairChoice, QOrder};
use mebkit::sweep::{sweep_entropy, sweep_prob, StateFamily};
use mebkit::uncertainty::{entropy_bound, DensityMatrix, LogBase};

fn summarize(name: &str, set: &MebSet) -> Result<(), Box<dyn std::error::Error>> {
    let prob = sweep_prob(set, 1000, 2024, StateFamily::HilbertSchmidt)?;
    let ent = sweep_entropy(set, 1000, 2024, StateFamily::Pure, LogBase::Bits)?;
    let min_prob = prob.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    let min_ent = ent.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    println!(
        "{name:<22} rhs={:.6} bound={:.6} bits  min slack: prob {min_prob:.3e}, entropy {min_ent:.3e}",
        prob[0].rhs, ent[0].lower_bound
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for delta in [0.0, 0.5, 0.9] {
        summarize(&format!("qubit delta={delta}"), &build_d2(delta)?)?;
    }
    for mu in [1.0 / 3.0, 0.4, 0.5] {
        summarize(&format!("qutrit mu={mu:.4}"), &build_d3(mu, QOrder::ALL[0], PairChoice::AB)?)?;
    }

    let mub = build_d3(1.0 / 3.0, QOrder::ALL[0], PairChoice::AB)?;
    let flat = entropy_bound(&DensityMatrix::maximally_mixed(3), &mub, LogBase::Nats)?;
    println!("\nI/3 on four MUBs: entropy sum {:.6} nats (4 ln 3 = {:.6})", flat.entropy_sum, 4.0 * 3f64.ln());
    Ok(())
}
