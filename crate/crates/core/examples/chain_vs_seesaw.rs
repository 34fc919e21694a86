//! Cross-checks chain solutions against the general machinery: the chain
//! operators evaluate to the chain value, satisfy every single-step
//! optimality condition, and are left in place by the see-saw.
//!
//! ```text
//! cargo run --release --example chain_vs_seesaw
//! ```

use bellsaw::bell::{builtin_i3322, evaluate_quantum_value};
use bellsaw::chain::{build_operators, run_chain, Branch, ChainOptions};
use bellsaw::seesaw::{run_seesaw_from, stationarity_residual, SeesawConfig};

fn main() -> bellsaw::Result<()> {
    let expr = builtin_i3322();
    println!("{:>3} {:>6} {:>18} {:>11} {:>11} {:>11}", "n", "branch", "chain", "eval diff", "residual", "see-saw");
    for n in [3, 4, 5, 6, 8, 9, 12] {
        for branch in Branch::BOTH {
            let r = run_chain(n, branch, &ChainOptions::default())?;
            let (alice, bob) = build_operators(&r.params)?;
            let state = r.params.state()?;
            let value = evaluate_quantum_value(&expr, &alice, &bob, &state)?;
            let residual = stationarity_residual(&expr, &alice, &bob, &state)?;
            let reseeded = run_seesaw_from(&expr, &SeesawConfig::new(n), bob, state)?;
            println!(
                "{n:>3} {branch:>6} {:>18.15} {:>11.2e} {:>11.2e} {:>11.2e}",
                r.value,
                value - r.value,
                residual,
                reseeded.value - r.value
            );
        }
    }
    Ok(())
}
