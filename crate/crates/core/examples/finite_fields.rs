//! Arithmetic in F_4 and F_9 and the digit bijection between field elements
//! and {0, …, q−1}.
//!
//! Run with `cargo run --example finite_fields`.

use qmc_ppc::{FieldSpec, Result};

fn main() -> Result<()> {
    let f4 = FieldSpec::of_order(4)?;
    println!("F_4 modulus: {}", f4.modulus().expect("extension field"));
    println!("multiplication table of F_4 (digits):");
    for a in f4.elements() {
        let row: Vec<String> = f4.elements().map(|b| f4.mul(a, b).digit().to_string()).collect();
        println!("  {} | {}", a.digit(), row.join(" "));
    }

    let f9 = FieldSpec::of_order(9)?;
    let g = f9.elem(3)?;
    let powers: Vec<u32> = (0..9).map(|e| f9.pow(g, e).digit()).collect();
    println!("powers of digit 3 in F_9: {powers:?}");
    for a in f9.elements().filter(|a| !a.is_zero()) {
        let inv = f9.inv(a)?;
        assert_eq!(f9.mul(a, inv), f9.one());
    }
    println!("every nonzero element of F_9 has an inverse");
    Ok(())
}
