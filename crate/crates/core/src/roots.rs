//! Cartan subalgebras, root decompositions, heights and multiplicities.
//!
//! Weights are stored as raw eigenvalue vectors over the acting torus 𝔥̄:
//! the listed Cartan basis, followed by ℰ for S(n) and H(n). The ℰ
//! coordinate of a root is therefore its height, which is what makes the
//! decomposition of S(n) and H(n) separate roots that agree on 𝔥.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::exterior::{build_algebra, AlgebraSpec, CartanAlgebra, ExteriorElement, Family, Parity, SuperDerivation};
use crate::{Error, Result, Q};

pub type Weight = Vec<i64>;

/// The hᵢ (i ∈ I) of the algebra, optionally followed by h_δ = ℰ.
#[derive(Debug, Clone)]
pub struct CartanBasis {
    pub elements: Vec<SuperDerivation>,
    pub labels: Vec<String>,
    /// Position of h_δ in `elements` when the algebra is extended.
    pub euler_dual_index: Option<usize>,
}

impl CartanBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn diag(n: usize, k: usize) -> SuperDerivation {
    SuperDerivation::term(ExteriorElement::generator(n, k), k)
}

fn listed_torus(spec: &AlgebraSpec) -> (Vec<SuperDerivation>, Vec<String>) {
    let n = spec.n;
    match spec.family {
        Family::W => ((1..=n).map(|k| diag(n, k)).collect(), (1..=n).map(|k| format!("h{k}")).collect()),
        Family::S | Family::STilde => (
            (1..n).map(|k| &diag(n, k) - &diag(n, k + 1)).collect(),
            (1..n).map(|k| format!("h{k}")).collect(),
        ),
        Family::H => {
            let m = n / 2;
            (
                (1..=m).map(|k| &diag(n, k) - &diag(n, m + k)).collect(),
                (1..=m).map(|k| format!("h{k}")).collect(),
            )
        }
    }
}

pub fn cartan_basis(spec: &AlgebraSpec) -> Result<CartanBasis> {
    spec.validate()?;
    let (mut elements, mut labels) = listed_torus(spec);
    let mut euler_dual_index = None;
    if spec.euler_in_algebra() {
        euler_dual_index = Some(elements.len());
        elements.push(SuperDerivation::euler(spec.n));
        labels.push("hδ".into());
    }
    Ok(CartanBasis {
        elements,
        labels,
        euler_dual_index,
    })
}

/// The torus whose eigenvalues define the weights: 𝔥, plus ℰ for S and H.
pub fn acting_torus(spec: &AlgebraSpec) -> Vec<SuperDerivation> {
    let (mut t, _) = listed_torus(spec);
    if spec.euler_acts() {
        t.push(SuperDerivation::euler(spec.n));
    }
    t
}

/// Eigenvalue of `h` on `v`, or `None` if `v` is not an eigenvector.
pub fn eigenvalue(h: &SuperDerivation, v: &SuperDerivation) -> Result<Option<Q>> {
    let hv = h.supercommutator(v)?;
    let cv = v.coordinates();
    let ch = hv.coordinates();
    let Some(pos) = cv.iter().position(|c| !c.is_zero()) else {
        return Ok(None);
    };
    let lambda = &ch[pos] / &cv[pos];
    let ok = cv.iter().zip(&ch).all(|(a, b)| &(a * &lambda) == b);
    Ok(ok.then_some(lambda))
}

#[derive(Debug, Clone, Serialize)]
pub struct RootDatum {
    pub weight: Weight,
    pub label: String,
    pub height: i32,
    pub parity: Parity,
    /// x_{α,1}, …, x_{α,μ(α)} ordered by monomial support.
    #[serde(skip)]
    pub vectors: Vec<SuperDerivation>,
}

impl RootDatum {
    pub fn multiplicity(&self) -> usize {
        self.vectors.len()
    }
}

/// Common ℤ-degree of the vectors of a root space.
pub fn height(rd: &RootDatum) -> Result<i32> {
    let mut hs: Vec<i32> = Vec::new();
    for v in &rd.vectors {
        let d = v.degree().ok_or_else(|| Error::MixedHeight {
            weight: rd.label.clone(),
            heights: Vec::new(),
        })?;
        if !hs.contains(&d) {
            hs.push(d);
        }
    }
    match hs.as_slice() {
        [h] => Ok(*h),
        _ => Err(Error::MixedHeight {
            weight: rd.label.clone(),
            heights: hs,
        }),
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub spec: AlgebraSpec,
    pub algebra: CartanAlgebra,
    pub cartan: CartanBasis,
    /// Elements defining the weight coordinates.
    pub torus: Vec<SuperDerivation>,
    /// Sorted by (height, weight).
    pub roots: Vec<RootDatum>,
    pub positive: Vec<bool>,
    /// Indices into `roots` of the simple system Δ.
    pub simple: Vec<usize>,
    index: BTreeMap<Weight, usize>,
}

impl RootSystem {
    pub fn find(&self, w: &[i64]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &[i64]) -> bool {
        self.index.contains_key(w)
    }

    pub fn root(&self, w: &[i64]) -> Option<&RootDatum> {
        self.find(w).map(|i| &self.roots[i])
    }

    pub fn rank(&self) -> usize {
        self.torus.len()
    }

    pub fn is_positive(&self, w: &[i64]) -> bool {
        self.find(w).map_or(false, |i| self.positive[i])
    }

    /// Height of a weight that is a root or zero.
    pub fn height_of(&self, w: &[i64]) -> Option<i32> {
        if w.iter().all(|&x| x == 0) {
            return Some(0);
        }
        self.root(w).map(|r| r.height)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(RootDatum::multiplicity).sum()
    }

    /// Whether ℰ-coordinates are part of the weights.
    pub fn has_delta(&self) -> bool {
        self.spec.euler_acts()
    }
}

pub fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(k: i64, a: &[i64]) -> Weight {
    a.iter().map(|x| k * x).collect()
}

pub fn neg(a: &[i64]) -> Weight {
    scale(-1, a)
}

fn weight_of(torus: &[SuperDerivation], v: &SuperDerivation, index: usize) -> Result<Weight> {
    torus
        .iter()
        .map(|h| {
            let lambda = eigenvalue(h, v)?.ok_or_else(|| Error::NonDiagonalizable {
                index,
                detail: format!("{v} is not an eigenvector of {h}"),
            })?;
            if !lambda.is_integer() {
                return Err(Error::NonDiagonalizable {
                    index,
                    detail: format!("eigenvalue {lambda} of {h} is not integral"),
                });
            }
            Ok(lambda.to_integer().to_i64().expect("small eigenvalue"))
        })
        .collect()
}

fn eps(i: usize) -> String {
    format!("ε{i}")
}

fn linear_label(coeffs: &[(i64, String)]) -> String {
    let mut s = String::new();
    for (c, name) in coeffs.iter().filter(|(c, _)| *c != 0) {
        let sign = if *c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        let mag = c.abs();
        if mag == 1 {
            s.push_str(&format!("{sign}{name}"));
        } else {
            s.push_str(&format!("{sign}{mag}{name}"));
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// ε-coordinates of a W(n)-weight vector (eigenvalues of each ξₖ∂ₖ).
fn epsilon_coords(n: usize, v: &SuperDerivation) -> Option<Vec<i64>> {
    (1..=n)
        .map(|k| {
            eigenvalue(&diag(n, k), v)
                .ok()
                .flatten()
                .and_then(|q| q.to_integer().to_i64())
        })
        .collect()
}

fn label_for(spec: &AlgebraSpec, weight: &[i64], v: &SuperDerivation) -> String {
    let n = spec.n;
    match spec.family {
        Family::W | Family::S => match epsilon_coords(n, v) {
            Some(a) => linear_label(&a.iter().enumerate().map(|(i, &c)| (c, eps(i + 1))).collect::<Vec<_>>()),
            None => format!("{weight:?}"),
        },
        Family::STilde => {
            // ε₁+⋯+εₙ = 0: pick the representative with least ℓ¹ norm
            let d = &weight[..n - 1];
            let mut base = vec![0i64; n];
            for k in (0..n - 1).rev() {
                base[k] = base[k + 1] + d[k];
            }
            let best = (-(n as i64)..=(n as i64))
                .map(|c| base.iter().map(|x| x + c).collect::<Vec<i64>>())
                .min_by_key(|a| (a.iter().map(|x| x.abs()).sum::<i64>(), std::cmp::Reverse(a.clone())))
                .expect("nonempty range");
            linear_label(&best.iter().enumerate().map(|(i, &c)| (c, eps(i + 1))).collect::<Vec<_>>())
        }
        Family::H => {
            let m = n / 2;
            let mut parts: Vec<(i64, String)> = vec![(weight[m], "δ".into())];
            parts.extend(weight[..m].iter().enumerate().map(|(i, &c)| (c, eps(i + 1))));
            linear_label(&parts)
        }
    }
}

/// Root decomposition of the algebra over 𝔥̄.
pub fn root_decomposition(spec: &AlgebraSpec) -> Result<RootSystem> {
    let algebra = build_algebra(*spec)?;
    root_decomposition_of(algebra)
}

pub fn root_decomposition_of(algebra: CartanAlgebra) -> Result<RootSystem> {
    let spec = algebra.spec;
    let cartan = cartan_basis(&spec)?;
    let torus = acting_torus(&spec);
    for (i, h) in torus.iter().enumerate() {
        for g in &torus[i..] {
            if !h.supercommutator(g)?.is_zero() {
                return Err(Error::InvalidSpec("torus elements do not commute".into()));
            }
        }
    }
    for h in &cartan.elements {
        if !algebra.contains(h) {
            return Err(Error::InvalidSpec(format!("Cartan element {h} is not in {spec}")));
        }
    }
    let mut spaces: BTreeMap<Weight, Vec<(usize, SuperDerivation)>> = BTreeMap::new();
    let mut zero_count = 0;
    for (idx, g) in algebra.basis.iter().enumerate() {
        let w = weight_of(&torus, &g.element, idx)?;
        if w.iter().all(|&x| x == 0) {
            zero_count += 1;
            continue;
        }
        spaces.entry(w).or_default().push((idx, g.element.clone()));
    }
    if zero_count != cartan.len() {
        return Err(Error::NonDiagonalizable {
            index: 0,
            detail: format!("zero weight space has dimension {zero_count}, Cartan basis has {}", cartan.len()),
        });
    }
    let mut roots = Vec::new();
    for (weight, members) in spaces {
        let mut vectors: Vec<SuperDerivation> = members.into_iter().map(|(_, v)| v).collect();
        vectors.sort_by_key(SuperDerivation::support_key);
        let degrees: Vec<i32> = members_heights(&algebra, &vectors);
        let label = label_for(&spec, &weight, &vectors[0]);
        let mut rd = RootDatum {
            weight,
            label,
            height: 0,
            parity: Parity::Even,
            vectors,
        };
        rd.height = match degrees.as_slice() {
            [h] => *h,
            _ => {
                return Err(Error::MixedHeight {
                    weight: rd.label.clone(),
                    heights: degrees,
                })
            }
        };
        rd.parity = Parity::of(rd.height as i64);
        roots.push(rd);
    }
    roots.sort_by(|a, b| (a.height, &a.weight).cmp(&(b.height, &b.weight)));
    let index: BTreeMap<Weight, usize> = roots.iter().enumerate().map(|(i, r)| (r.weight.clone(), i)).collect();
    let positive: Vec<bool> = roots
        .iter()
        .map(|r| match r.height {
            h if h > 0 => true,
            h if h < 0 => false,
            _ => r.weight.iter().find(|&&x| x != 0).map_or(false, |&x| x > 0),
        })
        .collect();
    let simple = (0..roots.len())
        .filter(|&i| positive[i])
        .filter(|&i| {
            !(0..roots.len()).filter(|&j| positive[j]).any(|j| {
                let rest: Weight = roots[i].weight.iter().zip(&roots[j].weight).map(|(a, b)| a - b).collect();
                index.get(&rest).map_or(false, |&k| positive[k])
            })
        })
        .collect();
    Ok(RootSystem {
        spec,
        algebra,
        cartan,
        torus,
        roots,
        positive,
        simple,
        index,
    })
}

/// Declared degrees of the algebra basis vectors in a root space. S̃(n)'s
/// degree −1 layer is not homogeneous in W(n), so the declared degree is used.
fn members_heights(algebra: &CartanAlgebra, vectors: &[SuperDerivation]) -> Vec<i32> {
    let mut hs = Vec::new();
    for v in vectors {
        let d = algebra
            .basis
            .iter()
            .find(|g| &g.element == v)
            .map(|g| g.degree)
            .expect("root vector comes from the basis");
        if !hs.contains(&d) {
            hs.push(d);
        }
    }
    hs
}

#[derive(Debug, Clone, Serialize)]
pub struct Clause {
    /// `symmetric`: α, −α ∈ R forces height 0 and μ = 1.
    /// `doubling`: 2α ∈ R exactly for the listed H and S̃ roots.
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub offenders: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootPropertyReport {
    pub algebra: String,
    pub clauses: Vec<Clause>,
}

impl RootPropertyReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }
}

/// Roots whose ε-part vanishes (H) or which equal some −εᵢ (S̃).
fn listed_doubling_roots(rs: &RootSystem) -> Vec<Weight> {
    let n = rs.spec.n;
    match rs.spec.family {
        Family::H => {
            let m = n / 2;
            rs.roots
                .iter()
                .filter(|r| r.weight[..m].iter().all(|&x| x == 0))
                .map(|r| r.weight.clone())
                .collect()
        }
        Family::STilde => (1..=n)
            .map(|i| {
                // −εᵢ evaluated on hₖ = ξₖ∂ₖ − ξₖ₊₁∂ₖ₊₁
                (1..n)
                    .map(|k| {
                        let a = if k == i { -1 } else { 0 };
                        let b = if k + 1 == i { -1 } else { 0 };
                        a - b
                    })
                    .collect::<Weight>()
            })
            .filter(|w| rs.contains(w))
            .collect(),
        _ => Vec::new(),
    }
}

pub fn verify_root_properties(rs: &RootSystem) -> RootPropertyReport {
    let mut clauses = Vec::new();

    let mut offenders = Vec::new();
    let mut symmetric = 0;
    for r in &rs.roots {
        if let Some(m) = rs.root(&neg(&r.weight)) {
            symmetric += 1;
            if r.height != 0 || m.height != 0 || r.multiplicity() != 1 {
                offenders.push(format!(
                    "{} (height {}, μ={}) with -α of height {}",
                    r.label,
                    r.height,
                    r.multiplicity(),
                    m.height
                ));
            }
        }
    }
    clauses.push(Clause {
        name: "symmetric".into(),
        passed: offenders.is_empty(),
        detail: format!("{symmetric} roots α with -α ∈ R"),
        offenders,
    });

    let doubling: Vec<Weight> = rs
        .roots
        .iter()
        .filter(|r| rs.contains(&scale(2, &r.weight)))
        .map(|r| r.weight.clone())
        .collect();
    let listed = listed_doubling_roots(rs);
    let mut offenders: Vec<String> = doubling
        .iter()
        .filter(|w| !listed.contains(w))
        .map(|w| format!("2·({}) ∈ R but α is not listed", rs.root(w).unwrap().label))
        .collect();
    offenders.extend(
        listed
            .iter()
            .filter(|w| !doubling.contains(w))
            .map(|w| format!("listed α = {} has 2α ∉ R", rs.root(w).unwrap().label)),
    );
    clauses.push(Clause {
        name: "doubling".into(),
        passed: offenders.is_empty(),
        detail: format!(
            "doubling roots: [{}]",
            doubling.iter().map(|w| rs.root(w).unwrap().label.clone()).collect::<Vec<_>>().join(", ")
        ),
        offenders,
    });

    RootPropertyReport {
        algebra: rs.spec.to_string(),
        clauses,
    }
}

/// [𝔤_α, 𝔤_β] ⊆ 𝔤_{α+β} on all pairs of root vectors.
pub fn check_weight_additivity(rs: &RootSystem) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    for a in &rs.roots {
        for b in &rs.roots {
            let target = add(&a.weight, &b.weight);
            for x in &a.vectors {
                for y in &b.vectors {
                    let c = x.supercommutator(y)?;
                    if c.is_zero() {
                        continue;
                    }
                    let w = weight_of(&rs.torus, &c, 0).ok();
                    if w.as_deref() != Some(&target[..]) {
                        failures.push(format!("[{x}, {y}] has weight {w:?}, expected {target:?}"));
                    } else if !target.iter().all(|&t| t == 0) && !rs.contains(&target) {
                        failures.push(format!("[{x}, {y}] ≠ 0 but {target:?} is not a root"));
                    }
                }
            }
        }
    }
    Ok(failures)
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (height {}, μ={})", self.label, self.height, self.multiplicity())
    }
}

/// Σ μ(α) + dim 𝔥 = dim 𝔤.
pub fn dimension_accounting(rs: &RootSystem) -> bool {
    rs.total_multiplicity() + rs.cartan.len() == rs.algebra.dim()
}

/// The Cartan element as combination of hᵢ, if it is one.
pub fn cartan_coordinates(rs: &RootSystem, h: &SuperDerivation) -> Option<Vec<Q>> {
    let coords: Vec<Vec<Q>> = rs.cartan.elements.iter().map(SuperDerivation::coordinates).collect();
    crate::linalg::CoordinateSolver::new(&coords)?.solve(&h.coordinates())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Family::*;

    fn rs(f: Family, n: usize) -> RootSystem {
        root_decomposition(&AlgebraSpec::new(f, n)).unwrap()
    }

    #[test]
    fn listed_cartan_bases() {
        let w = cartan_basis(&AlgebraSpec::new(W, 3)).unwrap();
        assert_eq!(w.elements.iter().map(|h| h.to_string()).collect::<Vec<_>>(), ["ξ1∂1", "ξ2∂2", "ξ3∂3"]);
        let s = cartan_basis(&AlgebraSpec::new(S, 3)).unwrap();
        assert_eq!(s.elements.iter().map(|h| h.to_string()).collect::<Vec<_>>(), ["ξ1∂1 - ξ2∂2", "ξ2∂2 - ξ3∂3"]);
        let h = cartan_basis(&AlgebraSpec::new(H, 4)).unwrap();
        assert_eq!(h.elements.iter().map(|h| h.to_string()).collect::<Vec<_>>(), ["ξ1∂1 - ξ3∂3", "ξ2∂2 - ξ4∂4"]);
        let se = cartan_basis(&AlgebraSpec::new(S, 3).with_euler()).unwrap();
        assert_eq!(se.len(), 3);
        assert_eq!(se.euler_dual_index, Some(2));
    }

    #[test]
    fn w2_weights() {
        let r = rs(W, 2);
        let d1 = SuperDerivation::partial(2, 1);
        assert_eq!(weight_of(&r.torus, &d1, 0).unwrap(), vec![-1, 0]);
        let top = SuperDerivation::monomial(2, 0b11, 2);
        assert_eq!(weight_of(&r.torus, &top, 0).unwrap(), vec![1, 0]);
        assert_eq!(r.roots.len(), 6);
        assert!(dimension_accounting(&r));
    }

    #[test]
    fn w_root_sets_match_listing() {
        for n in 2..=3 {
            let r = rs(W, n);
            let mut expected: Vec<Weight> = Vec::new();
            for mask in 0..(1u32 << n) {
                for j in 0..n {
                    let mut w: Weight = (0..n).map(|i| (mask >> i & 1) as i64).collect();
                    w[j] -= 1;
                    if w.iter().any(|&x| x != 0) && !expected.contains(&w) {
                        expected.push(w);
                    }
                }
            }
            expected.sort();
            let mut got: Vec<Weight> = r.roots.iter().map(|x| x.weight.clone()).collect();
            got.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn s3_drops_top_roots() {
        let r = rs(S, 3);
        let labels: Vec<&str> = r.roots.iter().map(|x| x.label.as_str()).collect();
        for j in 1..=3 {
            let top: String = (1..=3).filter(|&i| i != j).map(|i| format!("ε{i}")).collect::<Vec<_>>().join("+");
            assert!(!labels.contains(&top.as_str()), "{top}");
        }
        assert!(dimension_accounting(&r));
    }

    #[test]
    fn heights_of_monomials() {
        let r = rs(W, 3);
        let find = |v: SuperDerivation| r.roots.iter().find(|x| x.vectors.contains(&v)).unwrap().height;
        assert_eq!(find(SuperDerivation::partial(3, 1)), -1);
        assert_eq!(find(SuperDerivation::monomial(3, 0b001, 2)), 0);
        assert_eq!(find(SuperDerivation::monomial(3, 0b011, 3)), 1);
        for rd in &r.roots {
            assert_eq!(height(rd).unwrap(), rd.height);
        }
    }

    #[test]
    fn delta_coordinate_is_height() {
        let r = rs(H, 4);
        for rd in &r.roots {
            assert_eq!(*rd.weight.last().unwrap(), rd.height as i64);
        }
        assert!(dimension_accounting(&r));
    }

    #[test]
    fn w2_simple_system() {
        let r = rs(W, 2);
        let simple: Vec<&str> = r.simple.iter().map(|&i| r.roots[i].label.as_str()).collect();
        assert_eq!(simple, ["ε1-ε2", "ε2"]);
    }

    #[test]
    fn s_tilde_minus_eps_doubles() {
        let r = rs(STilde, 4);
        let labels: Vec<&str> = r.roots.iter().map(|x| x.label.as_str()).collect();
        for i in 1..=4 {
            assert!(labels.contains(&format!("-ε{i}").as_str()));
            assert!(labels.contains(&format!("-2ε{i}").as_str()));
        }
    }

    #[test]
    fn additivity() {
        for (f, n) in [(W, 2), (S, 3)] {
            assert!(check_weight_additivity(&rs(f, n)).unwrap().is_empty());
        }
    }
}
