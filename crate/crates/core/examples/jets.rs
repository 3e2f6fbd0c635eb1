//! Parses an expression and prints its order-3 jet next to finite differences.
//!
//!     cargo run --example jets -- "sqrt(1 + s^2)" 1.0

use revtype::expr::{eval, eval_jet3, parse, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "sqrt(1 + s^2)".into());
    let s: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1.0);

    let e = parse(&text)?;
    let params = Params::new();
    println!("parsed: {e}");
    let j = eval_jet3(&e, s, &params)?;
    println!("jet at s = {s}: [{}, {}, {}, {}]", j.v0, j.v1, j.v2, j.v3);

    let h = 1e-3;
    let f = |x: f64| eval(&e, x, &params);
    let (fm2, fm1, f0, fp1, fp2) = (
        f(s - 2.0 * h)?,
        f(s - h)?,
        f(s)?,
        f(s + h)?,
        f(s + 2.0 * h)?,
    );
    println!(
        "finite differences:   [{}, {}, {}, {}]",
        f0,
        (fp1 - fm1) / (2.0 * h),
        (fp1 - 2.0 * f0 + fm1) / (h * h),
        (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h)
    );

    match parse("sin(s") {
        Err(err) => println!("\"sin(s\" -> {err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
