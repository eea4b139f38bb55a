//! Capacities of the three supported channels and the noiseless capacities
//! of the runlength constraint itself.

use rmrll::channel::ChannelModel;
use rmrll::rll::noiseless_capacity;

fn main() {
    println!("channel capacities (bits per use):");
    for spec in [
        "bec:0.1", "bec:0.3", "bsc:0.05", "bsc:0.11", "awgn:0.5", "awgn:1.0",
    ] {
        let ch = ChannelModel::parse(spec).unwrap();
        println!("  {spec:>9} -> {:.6}", ch.capacity());
    }
    println!("\nnoiseless capacities of the (d,∞) constraint:");
    for d in 0..=4 {
        println!("  d = {d} -> {:.6}", noiseless_capacity(d));
    }
    println!("\n(d = 1 is log2 of the golden ratio)");
}
