//! Chain solution of I3322 at one dimension, printing the `c_i` and `λ_i`
//! profiles as CSV.
//!
//! ```text
//! cargo run --release --example i3322_chain -- [n] [0|-1]
//! ```

use bellsaw::chain::{run_chain, verify_optimality, Branch, ChainOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(99);
    let branch: Branch = args.next().map(|s| s.parse()).transpose()?.unwrap_or(Branch::MinusOne);

    let r = run_chain(n, branch, &ChainOptions::default())?;
    eprintln!(
        "n={n} branch={branch} value={:.15} cycles={} sign change at {:?}",
        r.value, r.iterations, r.sign_change_index
    );
    let report = verify_optimality(&r.params)?;
    eprintln!("largest single-operator gain {:.2e}, state gain {:.2e}", report.max_gain, report.state_gain);

    println!("i,c,lambda");
    for i in 0..=n {
        let lambda = if i == 0 { String::new() } else { r.params.lambda[i - 1].to_string() };
        println!("{i},{},{lambda}", r.params.c[i]);
    }
    Ok(())
}
