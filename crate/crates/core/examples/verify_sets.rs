use mebkit::distributions::ProbDist;
use mebkit::linalg::{c, CMatrix};
use mebkit::meb::{build_d3, fourier, verify_meb, MebMeta, MebSet, PairChoice, QOrder};

fn show(name: &str, set: &MebSet) -> Result<(), Box<dyn std::error::Error>> {
    let report = verify_meb(set, 1e-10)?;
    println!(
        "{name:<28} pass={:<5} max_residual={:.3e} same_basis={:.3e}",
        report.pass, report.max_residual, report.same_basis_residual
    );
    for p in &report.pairs {
        println!("    ({}, {}) sigma={:?} shift={:?} residual={:.2e}", p.alpha, p.beta, p.sigma, p.shift, p.residual);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mub = MebSet {
        d: 3,
        dist: ProbDist::uniform(3),
        bases: vec![CMatrix::identity(3), fourier(3)],
        meta: MebMeta::default(),
    };
    show("identity + Fourier", &mub)?;

    let twice = MebSet { bases: vec![CMatrix::identity(3), CMatrix::identity(3)], ..mub.clone() };
    show("identity twice", &twice)?;

    let mut set = build_d3(0.4, QOrder::ALL[3], PairChoice::BC)?;
    show("constructed mu=0.4", &set)?;
    let mut entries = set.bases[2].entries_row_major();
    entries[4] += c(1e-3, 0.0);
    set.bases[2] = CMatrix::new(3, 3, entries)?;
    show("one entry perturbed by 1e-3", &set)?;
    Ok(())
}
