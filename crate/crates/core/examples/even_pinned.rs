//! Even dimensions with the sign change pinned to the middle site
//! (`c_{n/2} = 0`). The family settles at the `c_n = 0` plateau instead of
//! following the free `c_n = −1` solutions.
//!
//! ```text
//! cargo run --release --example even_pinned
//! ```

use bellsaw::chain::{run_chain, Branch, ChainOptions};

fn main() -> bellsaw::Result<()> {
    println!("{:>5} {:>18} {:>18} {:>18}", "n", "pinned", "c_n=0", "free c_n=-1");
    for n in [100, 200, 400, 600, 800] {
        let pinned = run_chain(n, Branch::MinusOne, &ChainOptions::pinned_middle(n))?;
        let zero = run_chain(n, Branch::Zero, &ChainOptions::default())?;
        let free = run_chain(n, Branch::MinusOne, &ChainOptions::default())?;
        println!("{n:>5} {:>18.15} {:>18.15} {:>18.15}", pinned.value, zero.value, free.value);
    }
    Ok(())
}
