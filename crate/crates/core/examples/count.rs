//! Count the spectrum of the canonical d = 1 quotient up to five spectral
//! units (the README walk-through).

use heisweyl::quotient::QuotientGeometry;
use heisweyl::spectrum::{count_total, DEFAULT_BUDGET};
use heisweyl::{exact, Threshold};

fn main() -> Result<(), heisweyl::Error> {
    let q = QuotientGeometry::new(1, vec![1], exact::parse_rational("1")?)?;
    let alpha = exact::parse_rational("0")?;
    let thr = Threshold::from_units(exact::parse_rational("5")?)?;
    let n = count_total(&q, &alpha, &thr, DEFAULT_BUDGET)?;
    assert_eq!(n.n_total, 54u32.into());
    println!(
        "N(5u) = {} ({} shell + {} lattice)",
        n.n_total, n.n_a, n.n_b
    );
    Ok(())
}
