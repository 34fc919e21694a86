//! I3322 by see-saw at small dimensions. Qubits give 0.25; the value does
//! not drop as the dimension grows.
//!
//! ```text
//! cargo run --release --example i3322_qubits
//! ```

use bellsaw::bell::{builtin_i3322, I3322_UPPER_BOUND};
use bellsaw::seesaw::{run_seesaw, SeesawConfig};

fn main() -> bellsaw::Result<()> {
    let expr = builtin_i3322();
    println!("{:>3} {:>16} {:>8}", "n", "value", "restart");
    for n in 2..=5 {
        let config = SeesawConfig::new(n).restarts(200).seed(7);
        let best = run_seesaw::<f64>(&expr, &config)?;
        println!("{n:>3} {:>16.12} {:>8}", best.value, best.restart_index);
    }
    println!("upper bound {I3322_UPPER_BOUND}");
    Ok(())
}
