//! Large-dimension chain values on the `c_n = −1` branch and their
//! geometric-tail extrapolation.
//!
//! ```text
//! cargo run --release --example chain_limit
//! ```

use std::time::Instant;

use bellsaw::bell::I3322_CHAIN_LIMIT;
use bellsaw::chain::{extrapolate_limit, run_chain, Branch, ChainOptions};

fn main() -> bellsaw::Result<()> {
    let mut values = Vec::new();
    for n in [101, 201, 301, 501, 1001, 2001] {
        let start = Instant::now();
        let r = run_chain(n, Branch::MinusOne, &ChainOptions::default())?;
        println!(
            "n={n:>5} value={:.15} distance={:.3e} cycles={} ({:.2?})",
            r.value,
            r.distance(),
            r.iterations,
            start.elapsed()
        );
        values.push(r.value);
    }
    let k = values.len();
    let limit = extrapolate_limit([values[k - 3], values[k - 2], values[k - 1]]);
    println!("extrapolated {limit:.15}");
    println!("reference    {I3322_CHAIN_LIMIT:.12}");
    Ok(())
}
