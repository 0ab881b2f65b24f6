//! Exponent vectors for the Halton (2, 3) witness at u = 4, and the
//! multiples of log 4096 / log 81 that sit close to an integer.

use qmc_ppc::witness::{halton_k_search, near_integer_search};
use qmc_ppc::Result;

fn main() -> Result<()> {
    let search = halton_k_search(&[2, 3], 4, 40)?;
    println!("tau = {:?}, alpha = {:.6}, log f = {:.6}", search.tau, search.alpha[0], search.log_f[0]);
    for c in &search.candidates {
        println!("  k_1 = {:>2}: k = {:?}, delta = {:?}, frac = {:.4}", c.k1, c.kvec, c.delta, c.frac[0]);
    }

    let alpha = 4096f64.ln() / 81f64.ln();
    for hit in near_integer_search(&[alpha], 0.05, 100)? {
        println!("n = {:>3}: {{n alpha}} = {:.4}", hit.n, hit.frac[0]);
    }
    Ok(())
}
