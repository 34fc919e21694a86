//! Exact classical maxima by enumerating deterministic strategies.
//!
//! ```text
//! cargo run --release --example classical_bounds
//! ```

use bellsaw::bell::{builtin_chsh, builtin_i3322, classical_bound};

fn main() -> bellsaw::Result<()> {
    println!("chsh   {}", classical_bound(&builtin_chsh())?);
    println!("i3322  {}", classical_bound(&builtin_i3322())?);

    // Relabeling settings or swapping the parties leaves the bound alone.
    let i3322 = builtin_i3322();
    let relabeled = i3322.permuted(&[2, 0, 1], &[1, 2, 0])?.swapped();
    println!("i3322 relabeled {}", classical_bound(&relabeled)?);

    // A shifted CHSH: the constant term moves the bound by the same amount.
    let mut shifted = builtin_chsh();
    shifted.set_coeff(0, 0, 0.5)?;
    println!("chsh + 1/2 {}", classical_bound(&shifted)?);

    Ok(())
}
