//! How the coordinate ordering shapes the runs of the low-weight
//! information set — the quantity that caps linear constrained subcodes —
//! under the natural ordering, a reflected-Gray ordering, and random
//! permutations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmrll::math::binom;
use rmrll::rm::{
    gray_permutation, information_set, random_prefix_infoset_fraction, run_end_positions,
    CoordOrdering,
};

fn main() {
    let m = 8;
    println!("information-set runs at blocklength 2^{m}");
    println!(
        "{:>3} {:>12} {:>12} {:>14}",
        "r", "natural", "C(m-1,r)", "reflected Gray"
    );
    for r in 0..m {
        let info = information_set(m, r);
        let lex = run_end_positions(&CoordOrdering::Lex, &info, m).len();
        let gray = run_end_positions(&gray_permutation(m), &info, m).len();
        println!("{:>3} {:>12} {:>12} {:>14}", r, lex, binom(m - 1, r), gray);
    }
    println!("(natural-order run counts hit C(m-1, r) exactly; Gray stays under C(m, r+1)+1)\n");

    println!("random permutations: does a short prefix already contain an information set?");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for alpha in [0.05, 0.15, 0.25] {
        let (frac, se) = random_prefix_infoset_fraction(8, 4, alpha, 200, &mut rng).unwrap();
        println!("prefix (1+{alpha:.2})K: fraction {frac:.3} +/- {se:.3}");
    }
}
