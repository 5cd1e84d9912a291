//! Arithmetic in GF(8) and GF(9): elements are indexed by their base-p
//! coefficient vectors, constant term first.

use multipool::gf::{verify_field, Field};

fn main() -> multipool::Result<()> {
    let gf8 = Field::with_order(8)?;
    println!("GF(8) modulus coefficients (constant first): {:?}", gf8.modulus());
    let (a, b) = (gf8.elem(3)?, gf8.elem(5)?);
    println!("3 + 5 = {}", gf8.add(a, b)?.index());
    println!("2 * 2 = {}", gf8.mul(gf8.elem(2)?, gf8.elem(2)?)?.index());

    println!("\nmultiplication table of GF(8):");
    for x in gf8.elements() {
        let row: Vec<String> = gf8
            .elements()
            .map(|y| gf8.mul(x, y).map(|z| z.index().to_string()))
            .collect::<Result<_, _>>()?;
        println!("  {}", row.join(" "));
    }

    let gf9 = Field::with_order(9)?;
    for x in gf9.elements().skip(1) {
        let inv = gf9.inv(x)?.expect("nonzero elements are invertible");
        println!(
            "GF(9): {:?}^-1 = {:?}",
            gf9.coefficients(x),
            gf9.coefficients(inv)
        );
    }

    for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
        let report = verify_field(&Field::with_order(q)?);
        println!(
            "GF({q}): field axioms {}",
            if report.passed() { "hold" } else { "FAIL" }
        );
    }
    Ok(())
}
