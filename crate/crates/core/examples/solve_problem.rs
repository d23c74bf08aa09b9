//! Solves a selection problem given in the text format and compares the
//! heuristic with the exact answer when the problem is small.
//!
//! The first line is `k c alpha`, then one `r d e eligible` line per signal.
//!
//! cargo run --release --example solve_problem -- problem.txt

use jpeg_rdh::select::{
    brute_force_select, min_expansion, select_signals, SelectionProblem, BRUTE_FORCE_LIMIT,
};

const DEMO: &str = "\
6 9 0.5
4 3.0 2.0 1
3 1.0 4.0 1
5 6.0 1.0 1
2 0.5 3.0 1
1 0.2 0.5 1
6 9.0 0.0 0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEMO.to_owned(),
    };
    let p = SelectionProblem::parse(&text)?;
    let e_star = min_expansion(&p)?;
    println!(
        "k {} c {} alpha {}: least growth {e_star:.4}, budget {:.4}",
        p.len(),
        p.c,
        p.alpha,
        p.budget(e_star)
    );

    let v = select_signals(&p)?;
    let picked: Vec<usize> = v.selected().collect();
    println!(
        "heuristic: d {:.4} e {:.4} capacity {} signals {picked:?}",
        v.objective_d, v.objective_e, v.capacity
    );
    if p.eligible.iter().filter(|&&e| e).count() <= BRUTE_FORCE_LIMIT {
        let exact = brute_force_select(&p)?;
        println!(
            "exact:     d {:.4} e {:.4} capacity {}",
            exact.objective_d, exact.objective_e, exact.capacity
        );
    }
    Ok(())
}
