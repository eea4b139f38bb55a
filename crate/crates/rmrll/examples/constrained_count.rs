//! Count the (d,∞)-valid codewords of small Reed-Muller codes three ways:
//! exhaustively, through the split-pair decomposition, and against the
//! explicit linear subcode sitting inside.

use rmrll::rm::RmCode;
use rmrll::subcodes::{count_h_given_g, exact_constrained_count, LinearSubcode};

fn main() {
    println!(
        "{:>3} {:>3} {:>12} {:>14} {:>12}",
        "m", "r", "valid words", "via (g,h) pairs", "linear dim"
    );
    for (m, r) in [(2u32, 1u32), (3, 1), (3, 2), (4, 2), (4, 3)] {
        let exhaustive = exact_constrained_count(m, r, 1).unwrap();
        let gcode = RmCode::new(m - 1, r.min(m - 1)).unwrap();
        let mut decomposed = 0u64;
        gcode
            .for_each_codeword(|g| {
                if let Some(e) = count_h_given_g(m, r, g).unwrap() {
                    decomposed += 1u64 << e;
                }
            })
            .unwrap();
        let linear = LinearSubcode::new(m, r, 1).unwrap();
        println!(
            "{:>3} {:>3} {:>12} {:>14} {:>12}",
            m,
            r,
            exhaustive,
            decomposed,
            linear.dimension()
        );
        assert_eq!(exhaustive, decomposed);
    }
    println!("\nexhaustive and decomposed counts agree on every row");
}
