//! Loads an inequality from a text file and compares its classical bound
//! with see-saw lower bounds on the quantum value.
//!
//! ```text
//! cargo run --release --example custom_inequality -- [path]
//! ```

use bellsaw::bell::{classical_bound, parse_bell_expression, serialize_bell_expression};
use bellsaw::seesaw::{run_seesaw, SeesawConfig};

const DEFAULT_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/chained3.txt");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| DEFAULT_PATH.to_string());
    let text = std::fs::read_to_string(&path)?;
    let expr = parse_bell_expression(&text)?;
    print!("{}", serialize_bell_expression(&expr));

    println!("classical {}", classical_bound(&expr)?);
    for n in 2..=4 {
        let best = run_seesaw::<f64>(&expr, &SeesawConfig::new(n).restarts(40).seed(3))?;
        println!("n={n} quantum >= {:.10}", best.value);
    }
    Ok(())
}
