//! The Halton (2, 3) witness at u = 2, k = (1, 1): all structural checks hold
//! exactly, while the gap condition needs a much larger u.

use qmc_ppc::witness::{halton_witness_params, halton_witness_verify, DEFAULT_HALTON_BUDGET};
use qmc_ppc::Result;

fn main() -> Result<()> {
    let wit = halton_witness_params(&[2, 3], 2, &[1, 1])?;
    println!("P = {:?}, tau = {:?}, shape = {:?}", wit.p, wit.tau, wit.shape);
    println!("M = {}, L = {}, N = {}", wit.big_m, wit.l, wit.n);
    println!("f(u) = {:.4}, gamma^d = {:.4}, c = {:.4}", wit.f_u, wit.gamma_d, wit.c);

    let report = halton_witness_verify(&wit, DEFAULT_HALTON_BUDGET)?;
    println!("qualifying pairs: {}", report.qualifying_n);
    for (name, ok) in &report.structural_checks {
        println!("  {name}: {ok}");
    }
    println!("gap = {:.4} < c: {}", report.gap, report.gap_ok);
    for note in &report.notes {
        println!("note: {note}");
    }
    Ok(())
}
