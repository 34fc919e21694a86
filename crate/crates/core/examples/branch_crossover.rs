//! Sweeps both chain branches over a range of dimensions and reports where
//! the `c_n = −1` family overtakes the `c_n = 0` family.
//!
//! ```text
//! cargo run --release --example branch_crossover
//! ```

use bellsaw::chain::{sweep, Branch, ChainOptions};

fn main() -> bellsaw::Result<()> {
    let dims: Vec<usize> = (70..=90).collect();
    let rows = sweep(&dims, &Branch::BOTH, &ChainOptions::default(), 1)?;
    println!("{:>3} {:>18} {:>18} {:>12}", "n", "c_n=0", "c_n=-1", "diff");
    let mut previous: Option<f64> = None;
    for pair in rows.chunks(2) {
        let (zero, minus) = (&pair[0], &pair[1]);
        let diff = minus.value - zero.value;
        let mark = match previous {
            Some(p) if (p > 0.0) != (diff > 0.0) => "  <- crossover",
            _ => "",
        };
        println!("{:>3} {:>18.15} {:>18.15} {:>12.3e}{mark}", zero.n, zero.value, minus.value, diff);
        previous = Some(diff);
    }
    Ok(())
}
