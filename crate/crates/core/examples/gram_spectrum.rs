use mebkit::distributions::{n_abs, ProbDist};
use mebkit::uncertainty::{f_factor, gram_eigenvalues_closed, gram_matrix, overlap_gram};
use mebkit::meb::{build_d3, PairChoice, QOrder};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        vec![0.5, 0.3, 0.2],
        vec![0.4, 0.1, 0.3, 0.2],
        vec![0.3, 0.25, 0.2, 0.15, 0.1],
        vec![1.0 / 3.0; 3],
    ];
    for q in cases {
        let p = ProbDist::new(q)?;
        let d = p.d();
        let l = d + 1;
        let closed = gram_eigenvalues_closed(&p, l)?;
        let numeric = gram_matrix(&p, l).eigenvalues()?;
        let n: Vec<String> = (1..=d / 2).map(|k| format!("{:.4}", n_abs(&p, k).unwrap())).collect();
        println!(
            "d={d} L={l} |N|=[{}] f={:.6} max closed={:.6} deviation={:.1e}",
            n.join(", "),
            f_factor(&p, l),
            closed.max(),
            closed.max_deviation(&numeric)
        );
    }

    // ideal block matrix versus the overlap matrix of an actual set
    let set = build_d3(0.45, QOrder::ALL[0], PairChoice::AB)?;
    let ideal = gram_matrix(&set.dist, set.len()).eigenvalues()?;
    let actual = overlap_gram(&set).eigenvalues()?;
    println!("\nmu=0.45 L=4 ideal  {:?}", ideal.eigenvalues.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    println!("mu=0.45 L=4 actual {:?}", actual.eigenvalues.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>());
    Ok(())
}
