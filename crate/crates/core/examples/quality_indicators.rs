// The four generation-level measures on a small hand-made front.

use evotrace::metrics::{hypervolume_exact, igd, maximum_spread, spacing};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let front = [[1.0, 4.0], [2.0, 2.0], [4.0, 1.0]];
    let reference = [[0.0, 4.0], [1.0, 2.0], [2.0, 1.0], [4.0, 0.0]];

    let hv = hypervolume_exact(&front, &[5.0, 5.0]);
    let sp = spacing(&front);
    let ms = maximum_spread(&front);
    let igd = igd(&front, &reference)?;
    println!("HV w.r.t. (5, 5) = {hv}");
    println!("SP = {} (degenerate: {})", sp.value, sp.degenerate);
    println!("MS = {ms:.6}");
    println!("IGD = {igd:.6}");

    assert_eq!(hv, 11.0);
    assert_eq!(sp.value, 0.0);
    assert!((ms - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(evotrace::metrics::igd(&front, &front)?, 0.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
