//! Recovers the Tsirelson bound of CHSH in {0,1} form with qubits.
//!
//! ```text
//! cargo run --release --example chsh_tsirelson
//! ```

use bellsaw::bell::{builtin_chsh, CHSH_QUANTUM_MAX};
use bellsaw::seesaw::{run_seesaw, stationarity_residual, SeesawConfig};

fn main() -> bellsaw::Result<()> {
    let expr = builtin_chsh();
    let config = SeesawConfig::new(2).restarts(20).seed(1);
    let best = run_seesaw::<f64>(&expr, &config)?;

    println!("value      {:.12}", best.value);
    println!("1/sqrt2-1/2 {:.12}", CHSH_QUANTUM_MAX);
    println!("restart {} after {} cycles", best.restart_index, best.cycles_used);
    let residual = stationarity_residual(&expr, &best.alice, &best.bob, &best.state)?;
    println!("stationarity residual {residual:.2e}");

    for (k, a) in best.alice.iter().enumerate() {
        println!("A{}{}", k + 1, a.matrix());
    }
    for (k, b) in best.bob.iter().enumerate() {
        println!("B{}{}", k + 1, b.matrix());
    }
    println!("state {:?}", best.state.abs());
    Ok(())
}
