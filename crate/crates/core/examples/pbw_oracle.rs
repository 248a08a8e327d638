// The PBW oracle for U(𝔤⊗A) over ℚ: products in normal form, divided
// powers, the degree filtration and pᵢ(χ).

use cartan_zform::combinatorics::Multiset;
use cartan_zform::enveloping::Oracle;
use cartan_zform::exterior::{AlgebraSpec, Family};
use cartan_zform::zform::{context, AOrder, NamedOrder};

pub fn run_example() -> cartan_zform::Result<()> {
    let ctx = context(&AlgebraSpec::new(Family::W, 2), "trunc-poly-4", NamedOrder::Height, AOrder::Natural)?;
    let oracle = Oracle::new(ctx.env.clone());
    let cb = &ctx.cb;
    let rs = &cb.rs;
    let alpha = rs.simple.iter().copied().find(|&r| rs.roots[r].height == 0).expect("an even simple root");
    let minus = rs.find(&cartan_zform::roots::neg(&rs.roots[alpha].weight)).expect("−α is a root");
    let t = ctx.algebra.find("t").expect("t");

    let x = oracle.letter(cb.x(alpha, 1), t);
    let y = oracle.letter(cb.x(minus, 1), t);
    let xy = oracle.mul(&x, &y);
    let yx = oracle.mul(&y, &x);
    println!("x·y = {}", ctx.env.format(&xy));
    println!("y·x = {}", ctx.env.format(&yx));
    println!("[x, y] = {}", ctx.env.format(&oracle.supercommutator(&x, &y)));
    assert_eq!(xy.degree()?, 2);
    assert_eq!((&xy - &yx).degree()?, 1);

    let x3 = oracle.divided_power(cb.x(alpha, 1), Some(t), 3)?;
    println!("(x⊗t)^(3) = {}", ctx.env.format(&x3));

    let p = oracle.p_i(0, &Multiset::with(t, 2));
    println!("p₁(2χ_t) = {}", ctx.env.format(&p));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
