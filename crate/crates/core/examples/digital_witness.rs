//! Builds and verifies the witness for the digital sequence with
//! p = (x, x + 1) over F_2 at u = 8. The exact pair count over all 131072
//! points is compared against the required c·N.
//!
//! Run in release mode: `cargo run --release --example digital_witness`.

use qmc_ppc::genmat::{Construction, SeqDef};
use qmc_ppc::poly::parse_poly_list;
use qmc_ppc::witness::{digital_witness_params, digital_witness_verify, DEFAULT_DIGITAL_BUDGET};
use qmc_ppc::{FieldSpec, Result};

fn main() -> Result<()> {
    let f2 = FieldSpec::prime(2)?;
    let def = SeqDef::new(&f2, parse_poly_list(&f2, "x;x+1")?, Construction::Niederreiter)?;
    let wit = digital_witness_params(&def, 8, Some(0.01))?;
    println!("N = {}, M = {}, m = {}, w = {}", wit.n, wit.big_m, wit.m, wit.w);
    println!("eps = {} in ({}, {})", wit.eps, wit.eps_min, wit.eps_max);
    println!("a = {:.6}, b = {:.6}, c = {:.6}, gap = {:.6}", wit.a, wit.b, wit.c, wit.gap);

    let report = digital_witness_verify(&wit, &def, DEFAULT_DIGITAL_BUDGET)?;
    println!("pairs in range: {} (need {})", report.measured_count, report.required);
    println!("qualifying first-block points: {}", report.qualifying_n);
    for (name, ok) in &report.structural_checks {
        println!("  {name}: {ok}");
    }
    println!("verdict: {}", report.verdict);
    Ok(())
}
