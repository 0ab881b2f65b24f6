//! Exact points of digital and radical-inverse sequences, plus the
//! elementary-interval fill of a (0, e, 2)-net.

use qmc_ppc::genmat::{Construction, SeqDef};
use qmc_ppc::poly::parse_poly_list;
use qmc_ppc::sequences::{halton_point, intervals_evenly_filled, radical_inverse, DigitalSeq};
use qmc_ppc::{FieldSpec, Result};

fn main() -> Result<()> {
    let f2 = FieldSpec::prime(2)?;
    let def = SeqDef::new(&f2, parse_poly_list(&f2, "x;x+1")?, Construction::Niederreiter)?;
    let seq = DigitalSeq::from_def(&def, 8)?;
    println!("digital sequence, p = (x, x+1):");
    for n in 0..8u128 {
        let p = seq.point(n, 8)?;
        println!("  x_{n} = {:?}", p.to_f64());
    }

    let points: Vec<_> = (0..256u128).map(|n| seq.point(n, 8)).collect::<Result<_>>()?;
    for shape in [[8, 0], [4, 4], [2, 6], [0, 8]] {
        let ok = intervals_evenly_filled(&points, &shape, 1)?;
        println!("first 256 points, intervals of shape {shape:?}: one point each = {ok}");
    }

    println!("Halton (2, 3):");
    for n in 0..6u128 {
        let p = halton_point(&[2, 3], n, 6)?;
        let coords: Vec<String> = p
            .coords()
            .iter()
            .map(|c| Ok(format!("{}/{}", c.numerator()?, c.denominator()?)))
            .collect::<Result<_>>()?;
        println!("  h_{n} = ({})", coords.join(", "));
    }
    let vdc: Vec<f64> = (0..8u128).map(|n| radical_inverse(2, n).map(|c| c.to_f64())).collect::<Result<_>>()?;
    println!("van der Corput base 2: {vdc:?}");
    Ok(())
}
