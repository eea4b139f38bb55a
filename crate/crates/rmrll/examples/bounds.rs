//! Closed-form rate bounds for (d,∞)-constrained subcodes of rate-R parents,
//! plus the crossover points where the two-stage scheme takes the lead.

use rmrll::subcodes::{bound_table, crossover, crossovers, RateBound};

fn main() {
    let d = 1;
    let tau = 50;
    println!("rate bounds for d = {d} (two-stage resolution tau = {tau})");
    println!(
        "{:>5} {:>10} {:>12} {:>10} {:>10} {:>10} {:>10}",
        "R", "linear_lb", "nonlinear_lb", "linear_ub", "general_ub", "two_stage", "coset_avg"
    );
    for row in bound_table(d, 0.1, tau).unwrap() {
        println!(
            "{:>5.2} {:>10.4} {:>12.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            row.rate,
            row.linear_lb,
            row.nonlinear_lb.unwrap(),
            row.linear_ub,
            row.general_ub_1inf.unwrap(),
            row.concat_lb,
            row.coset_avg
        );
    }

    let concat = |r: f64| RateBound::ConcatLb { tau }.eval(r, d).unwrap();
    let vs_half = crossover(&concat, |r| r / 2.0, 0.5, 0.95).unwrap();
    let vs_nonlin = crossovers(&concat, |r| (r - 0.375).max(0.0), 0.45, 0.95, 2000);
    println!("\ntwo-stage beats the linear subcode rate R/2 for R > {vs_half:.4}");
    println!(
        "two-stage beats R - 3/8 outside ({:.4}, {:.4})",
        vs_nonlin[0], vs_nonlin[1]
    );
    println!(
        "on an erasure channel (R = 1 - eps) the first crossover sits at eps = {:.4}",
        1.0 - vs_half
    );
}
