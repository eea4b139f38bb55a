//! Exact bit-wise erasure decoding of a Reed-Muller code: the affine
//! decoder outputs a bit only when every consistent codeword agrees on it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmrll::channel::{bec_bitmap_decode, transmit, BitDecision, ChannelModel};
use rmrll::rm::RmCode;

fn main() {
    let code = RmCode::new(4, 1).unwrap();
    println!(
        "RM-style code: length {}, dimension {}, minimum distance {}",
        code.n(),
        code.k(),
        code.min_distance()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let word = code.random_codeword(&mut rng);
    println!("transmitted: {}", word.to_bit_string());
    for eps in [0.1, 0.3, 0.5, 0.7] {
        let y = transmit(&word, ChannelModel::Bec(eps), &mut rng);
        let erased = y.iter().filter(|&&v| v == 0.0).count();
        let decisions = bec_bitmap_decode(code.generator(), &y).unwrap();
        let decided = decisions.iter().filter(|b| b.decided().is_some()).count();
        let wrong = decisions
            .iter()
            .enumerate()
            .filter(|(i, b)| b.decided().is_some_and(|v| v != word.get(*i)))
            .count();
        let rendered: String = decisions
            .iter()
            .map(|b| match b {
                BitDecision::Zero => '0',
                BitDecision::One => '1',
                BitDecision::Undecided => '?',
            })
            .collect();
        println!(
            "eps = {eps:.1}: {erased:>2} erased -> {rendered}  ({decided}/16 decided, {wrong} wrong)"
        );
    }
    println!("\ndecided bits are never wrong; heavier erasure only shrinks them");
}
