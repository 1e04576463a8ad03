//! Dense scan of the l/l_a = 2 asymmetric-arm family checking for any
//! squeezing where the swapped state's EoF exceeds direct transmission's.

use cvswap_core::channels::{lossy_tmss, swap_lossy, ChannelSpec};
use cvswap_core::measures::eof_params;

fn main() {
    let loss: f64 = 2.0;
    let mut crossings = 0u32;
    let mut max_swap: f64 = 0.0;
    let mut best_gap = f64::NEG_INFINITY; // swap - direct
    let mut best_r = 0.0;
    for i in 1..=4000 {
        let r = 6.0 * i as f64 / 4000.0;
        let d = eof_params(&lossy_tmss(&ChannelSpec::new(r, 1.0, (-loss).exp()).unwrap()).to_standard());
        let s = eof_params(&swap_lossy(&ChannelSpec::new(r, 1.0, (-loss / 2.0).exp()).unwrap()).to_standard());
        if s > d {
            crossings += 1;
        }
        max_swap = max_swap.max(s);
        if s - d > best_gap {
            best_gap = s - d;
            best_r = r;
        }
    }
    println!("l/l_a = 2, r in (0, 6], 4000 points: swap>direct at {crossings} points");
    println!("max swap EoF = {max_swap:.6e}; best (swap - direct) gap = {best_gap:.6e} at r = {best_r:.4}");
}
