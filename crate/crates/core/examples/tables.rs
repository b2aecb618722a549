//! Print the rank-3 Betti tables on Σ₁ at J = C + f, with timings.

use std::time::Instant;

use hirzebruch_bps::invariants::GeneratingFunction;
use hirzebruch_bps::lattice::{DivisorClass, Polarization, Side, Surface};

fn main() {
    let s = Surface::new(1).unwrap();
    let j = Polarization::integral(1, 0, Side::Plus).unwrap();
    for (c1, lo, hi) in [(DivisorClass::new(-1, 0), 2, 5), (DivisorClass::new(-1, -1), 2, 6), (DivisorClass::new(-1, -2), 3, 6)] {
        let t = Instant::now();
        let g = GeneratingFunction::new(s, 3, c1, j, hi).unwrap();
        println!("c1 = {c1}");
        for c2 in lo..=hi {
            match g.record(c2) {
                Ok(r) => {
                    let b: Vec<String> = r.even_betti().iter().map(|b| b.to_string()).collect();
                    println!("  c2 = {c2}: b = [{}], χ = {}", b.join(", "), r.euler);
                }
                Err(e) => println!("  c2 = {c2}: {e}"),
            }
        }
        println!("  ({:.2?})", t.elapsed());
    }
}
