//! See-saw over complex matrices. The optimizer, the projector steps and the
//! state step are the same code instantiated for `Complex64`.
//!
//! ```text
//! cargo run --release --example complex_seesaw
//! ```

use bellsaw::bell::{builtin_chsh, builtin_i3322, evaluate_quantum_value};
use bellsaw::seesaw::{run_seesaw, SeesawConfig};
use num_complex::Complex64;

fn main() -> bellsaw::Result<()> {
    for (name, expr) in [("chsh", builtin_chsh()), ("i3322", builtin_i3322())] {
        for n in [2, 3] {
            let config = SeesawConfig::new(n).restarts(30).seed(11);
            let real = run_seesaw::<f64>(&expr, &config)?;
            let complex = run_seesaw::<Complex64>(&expr, &config)?;
            let check = evaluate_quantum_value(&expr, &complex.alice, &complex.bob, &complex.state)?;
            println!(
                "{name:<6} n={n} real {:.12} complex {:.12} (recomputed {:.12})",
                real.value, complex.value, check
            );
        }
    }
    Ok(())
}
