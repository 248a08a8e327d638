// Multisets over a basis of A, the index sets of the straightening sums,
// and the coefficient algebras.

use cartan_zform::combinatorics::{
    enumerate_cp_k, enumerate_cs_k, enumerate_f, multinomial, weighted_sum, MonoidAlgebra, Multiset, ZeroParts,
};

pub fn run_example() -> cartan_zform::Result<()> {
    let mut chi = Multiset::new();
    chi.insert('a', 2);
    chi.insert('b', 1);
    let subs = enumerate_f(&chi);
    println!("χ = a²b has {} sub-multisets; multinomial {}", subs.len(), multinomial(&chi));
    assert_eq!(subs.len(), 6);

    let cs = enumerate_cs_k(&chi, 2, ZeroParts::Excluded);
    let show = |m: &Multiset<char>| m.iter().map(|(s, c)| if c == 1 { s.to_string() } else { format!("{s}^{c}") }).collect::<String>();
    for psi in &cs {
        let parts: Vec<String> = psi.iter().map(|(phi, c)| format!("{c}·{}", show(phi))).collect();
        println!("  {{{}}} sums to {}", parts.join(", "), show(&weighted_sum(psi)));
    }
    let cp = enumerate_cp_k(3, 2);
    println!("3 as a sum of two non-negative parts: {} ways", cp.len());

    let a = MonoidAlgebra::by_name("trunc-poly-4")?;
    let t = a.find("t").expect("t is a basis element");
    let t3 = a.pow(t, 3).expect("t³ ≠ 0");
    println!("in {}: t·t³ = {:?}, t³ = {}", a.name, a.mul(t, t3).map(|x| a.label(x).to_string()), a.label(t3));
    let c = MonoidAlgebra::by_name("cyclic-4")?;
    let s = c.find("t").expect("generator");
    println!("in {}: t⁴ = {}", c.name, c.label(c.pow(s, 4).expect("units do not vanish")));
    assert!(a.check_axioms() && c.check_axioms());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
