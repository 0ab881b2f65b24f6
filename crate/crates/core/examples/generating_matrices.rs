//! Generating matrices for p_1 = x, p_2 = x + 1 over F_2 with both
//! constructions. After scrambling by S the rows become short.

use qmc_ppc::genmat::{row_length, scrambled, scrambler_matrix, tse_check, Construction, GenMatrix, SeqDef};
use qmc_ppc::poly::parse_poly_list;
use qmc_ppc::{FieldSpec, Result};

fn show(name: &str, m: &GenMatrix) {
    println!("{name}:");
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.digit().to_string()).collect();
        println!("  {}", row.join(" "));
    }
}

fn main() -> Result<()> {
    let f2 = FieldSpec::prime(2)?;
    let polys = parse_poly_list(&f2, "x;x+1")?;
    let size = 6;
    for method in [Construction::Niederreiter, Construction::ColumnByColumn] {
        let def = SeqDef::new(&f2, polys.clone(), method)?;
        let mats = def.matrices(size)?;
        println!("== {method:?}");
        for (j, m) in mats.iter().enumerate() {
            show(&format!("C_{}", j + 1), m);
        }
        let cert = tse_check(&def.matrices(10)?, def.degrees(), 0, 10)?;
        println!("t = 0 up to m = 10: {}", if cert.is_none() { "holds" } else { "fails" });
    }

    let def = SeqDef::new(&f2, polys, Construction::Niederreiter)?;
    let s = scrambler_matrix(&def, 12);
    let mats = scrambled(&def.matrices(12)?, &s)?;
    show("S (leading 6×6)", &s.slice(size, size)?);
    let lengths: Vec<usize> = (1..=5).map(|f| row_length(&mats, f)).collect::<Result<_>>()?;
    println!("row lengths L_1..L_5 of C·S: {lengths:?}");
    Ok(())
}
