//! Monte-Carlo lower bound on the rate of no-consecutive-ones subcodes,
//! compared with its closed-form (Jensen) counterpart across a rate grid.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmrll::rm::min_order_for_rate;
use rmrll::subcodes::{jensen_lower_bound, mc_lower_bound};

fn main() {
    let m = 11;
    let samples = 2000;
    println!("m = {m}, {samples} samples per point");
    println!(
        "{:>5} {:>5} {:>10} {:>12} {:>10}",
        "R", "order", "sampled", "stderr", "closed"
    );
    for i in 0..8 {
        let rate = 0.55 + 0.05 * i as f64;
        let r = min_order_for_rate(m, rate).unwrap().max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1 + i);
        let est = mc_lower_bound(m, r, samples, &mut rng).unwrap();
        let jensen = jensen_lower_bound(m, r).unwrap();
        println!(
            "{:>5.2} {:>5} {:>10.4} {:>12.2e} {:>10.4}",
            rate, r, est.rate, est.rate_stderr, jensen
        );
    }
    println!("\nthe sampled curve dominates the closed form at every point;");
    println!("both approach R - 3/8 as the blocklength grows");
}
