//! Polynomials over F_q, up to the Laurent coefficients of x^r / p(x)^s that
//! fill Niederreiter matrices.

use qmc_ppc::{FieldSpec, Poly, Result};

fn main() -> Result<()> {
    let f2 = FieldSpec::prime(2)?;
    let p = Poly::parse(&f2, "x^2+x+1")?;
    let a = Poly::parse(&f2, "x^5+x+1")?;
    let (quot, rem) = a.divmod(&p)?;
    println!("({a}) = ({p})·({quot}) + ({rem})");
    println!("{p} irreducible: {}", p.is_irreducible()?);
    println!("x^2+1 irreducible: {}", Poly::parse(&f2, "x^2+1")?.is_irreducible()?);

    for s in 1..=3 {
        let coeffs = p.laurent_coeffs(s, 0, 12)?;
        let digits: Vec<u32> = coeffs.iter().map(|c| c.digit()).collect();
        println!("1/({p})^{s} = Σ c_l x^-l, c = {digits:?}");
    }

    let expansion = p.base_expansion(7)?;
    let shown: Vec<String> = expansion.iter().map(|r| r.to_string()).collect();
    println!("x^7 in base {p}: digits [{}]", shown.join(", "));
    Ok(())
}
