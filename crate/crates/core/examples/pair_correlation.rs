//! F_N(s) for several point sources next to the Poissonian target (2s)^d.

use qmc_ppc::genmat::{Construction, SeqDef};
use qmc_ppc::paircorr::{ppc_convergence, CountMode};
use qmc_ppc::poly::parse_poly_list;
use qmc_ppc::sequences::{DigitalSeq, SeqSource};
use qmc_ppc::{FieldSpec, Result};

fn main() -> Result<()> {
    let f2 = FieldSpec::prime(2)?;
    let def = SeqDef::new(&f2, parse_poly_list(&f2, "x;x+1")?, Construction::Niederreiter)?;
    let sources = [
        ("random", SeqSource::Random { dim: 2, seed: 7 }),
        ("kronecker", SeqSource::Kronecker { alpha: vec![2f64.sqrt(), 3f64.sqrt()] }),
        ("halton", SeqSource::halton(vec![2, 3])?),
        ("digital", SeqSource::Digital { seq: DigitalSeq::from_def(&def, 14)? }),
    ];
    let n_list = [1024, 4096, 16384];
    let s_grid = [0.5, 1.0, 1.5];
    for (name, src) in &sources {
        println!("== {name}");
        println!("{:>6} {:>5} {:>10} {:>8}", "N", "s", "F_N(s)", "target");
        for row in ppc_convergence(src, &n_list, &s_grid, CountMode::Grid)? {
            println!("{:>6} {:>5} {:>10.4} {:>8.4}", row.n, row.s, row.f, row.target);
        }
    }
    Ok(())
}
