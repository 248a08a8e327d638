//! The Grassmann algebra Λ(n), its superderivations, and the Cartan-type
//! families built inside W(n) = Der Λ(n).
//!
//! Monomials are stored as bitmasks (bit `i` is ξ_{i+1}); a product is always
//! kept in ascending index order, with the reordering sign folded into the
//! coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CoordinateSolver};
use crate::{q, Error, Result, Q};

/// ℤ₂-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Sign of moving the sorted block `b` to the right of the sorted block `a`,
/// or `None` if they share an index.
fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> (j + 1)).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// A square-free monomial ξ_I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExteriorMonomial {
    pub mask: u32,
}

impl ExteriorMonomial {
    pub fn degree(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn parity(self) -> Parity {
        Parity::of(self.degree() as i64)
    }

    /// Indices in ascending order, 1-based.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.mask >> i & 1 == 1).map(|i| i + 1).collect()
    }
}

/// Total order used for enumerations: by size, then lexicographic on indices.
pub fn graded_lex(a: u32, b: u32) -> std::cmp::Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let ia = ExteriorMonomial { mask: a }.indices();
        let ib = ExteriorMonomial { mask: b }.indices();
        ia.cmp(&ib)
    })
}

/// Element of Λ(n) with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    n: usize,
    terms: BTreeMap<u32, Q>,
}

impl ExteriorElement {
    pub fn zero(n: usize) -> Self {
        ExteriorElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_mask(n, 0, Q::one())
    }

    /// ξ_i, 1-based.
    pub fn generator(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "generator index out of range");
        Self::from_mask(n, 1 << (i - 1), Q::one())
    }

    pub fn from_mask(n: usize, mask: u32, c: Q) -> Self {
        let mut e = Self::zero(n);
        if !c.is_zero() {
            e.terms.insert(mask, c);
        }
        e
    }

    /// ξ_{i₁}⋯ξ_{i_k} in the given (not necessarily sorted) order, 1-based.
    pub fn monomial(n: usize, indices: &[usize]) -> Self {
        indices.iter().fold(Self::one(n), |acc, &i| {
            acc.wedge(&Self::generator(n, i)).expect("same rank")
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (ExteriorMonomial, &Q)> {
        self.terms.iter().map(|(&m, c)| (ExteriorMonomial { mask: m }, c))
    }

    pub fn coefficient(&self, mask: u32) -> Q {
        self.terms.get(&mask).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, mask: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        ExteriorElement {
            n: self.n,
            terms: self.terms.iter().map(|(&m, x)| (m, x * c)).collect(),
        }
    }

    /// Parity when homogeneous; `None` for zero or mixed elements.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|&m| ExteriorMonomial { mask: m }.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                if let Some(neg) = wedge_sign(a, b) {
                    let c = x * y;
                    out.add_term(a | b, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// ∂_i, 1-based: removes ξ_i with sign (−1)^{#{j ∈ I : j < i}}.
    pub fn partial(&self, i: usize) -> Self {
        let bit = 1u32 << (i - 1);
        let mut out = Self::zero(self.n);
        for (&m, c) in &self.terms {
            if m & bit != 0 {
                let neg = (m & (bit - 1)).count_ones() % 2 == 1;
                out.add_term(m ^ bit, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, suffix: &str) -> fmt::Result {
        let mut keys: Vec<u32> = self.terms.keys().copied().collect();
        keys.sort_by(|&a, &b| graded_lex(a, b));
        for (pos, m) in keys.iter().enumerate() {
            let c = &self.terms[m];
            let mono: String = ExteriorMonomial { mask: *m }
                .indices()
                .iter()
                .map(|i| format!("ξ{i}"))
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let body = format!("{mono}{suffix}");
            if abs.is_one() {
                if body.is_empty() {
                    write!(f, "1")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else {
                write!(f, "{abs}{body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        self.fmt_with(f, "")
    }
}

impl Add for &ExteriorElement {
    type Output = ExteriorElement;
    fn add(self, other: &ExteriorElement) -> ExteriorElement {
        assert_eq!(self.n, other.n, "rank mismatch");
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl Sub for &ExteriorElement {
    type Output = ExteriorElement;
    fn sub(self, other: &ExteriorElement) -> ExteriorElement {
        self + &(-other)
    }
}

impl Neg for &ExteriorElement {
    type Output = ExteriorElement;
    fn neg(self) -> ExteriorElement {
        self.scale(&-Q::one())
    }
}

pub fn wedge(a: &ExteriorElement, b: &ExteriorElement) -> Result<ExteriorElement> {
    a.wedge(b)
}

/// Σ fᵢ∂ᵢ ∈ W(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperDerivation {
    n: usize,
    comps: Vec<ExteriorElement>,
}

impl SuperDerivation {
    pub fn zero(n: usize) -> Self {
        SuperDerivation {
            n,
            comps: vec![ExteriorElement::zero(n); n],
        }
    }

    /// ∂_i, 1-based.
    pub fn partial(n: usize, i: usize) -> Self {
        Self::term(ExteriorElement::one(n), i)
    }

    /// f ∂_i.
    pub fn term(f: ExteriorElement, i: usize) -> Self {
        let mut d = Self::zero(f.rank());
        d.comps[i - 1] = f;
        d
    }

    /// ξ_I ∂_j for a bitmask `I` and 1-based `j`.
    pub fn monomial(n: usize, mask: u32, j: usize) -> Self {
        Self::term(ExteriorElement::from_mask(n, mask, Q::one()), j)
    }

    pub fn from_components(comps: Vec<ExteriorElement>) -> Result<Self> {
        let n = comps.len();
        if let Some(c) = comps.iter().find(|c| c.rank() != n) {
            return Err(Error::RankMismatch(n, c.rank()));
        }
        Ok(SuperDerivation { n, comps })
    }

    /// ℰ = Σ ξᵢ∂ᵢ.
    pub fn euler(n: usize) -> Self {
        (1..=n).fold(Self::zero(n), |acc, i| {
            &acc + &Self::term(ExteriorElement::generator(n, i), i)
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// The coefficient f_i of ∂_i, 1-based.
    pub fn component(&self, i: usize) -> &ExteriorElement {
        &self.comps[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(ExteriorElement::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        SuperDerivation {
            n: self.n,
            comps: self.comps.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Parity when homogeneous (f∂ᵢ has parity |f|+1).
    pub fn parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        for f in &self.comps {
            for (m, _) in f.terms() {
                let p = m.parity() + Parity::Odd;
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        found
    }

    /// ℤ-degree in W(n) when homogeneous (f∂ᵢ has degree |f|−1).
    pub fn degree(&self) -> Option<i32> {
        let mut found: Option<i32> = None;
        for f in &self.comps {
            for (m, _) in f.terms() {
                let d = m.degree() as i32 - 1;
                match found {
                    None => found = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        found
    }

    /// Split into (even, odd) parts.
    pub fn parity_parts(&self) -> (Self, Self) {
        let mut even = Self::zero(self.n);
        let mut odd = Self::zero(self.n);
        for (i, f) in self.comps.iter().enumerate() {
            for (m, c) in f.terms() {
                // f∂ is even exactly when f is odd
                let target = if m.parity().is_odd() { &mut even } else { &mut odd };
                target.comps[i].add_term(m.mask, c.clone());
            }
        }
        (even, odd)
    }

    pub fn apply(&self, f: &ExteriorElement) -> Result<ExteriorElement> {
        if self.n != f.rank() {
            return Err(Error::RankMismatch(self.n, f.rank()));
        }
        let mut out = ExteriorElement::zero(self.n);
        for (i, fi) in self.comps.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let d = f.partial(i + 1);
            if !d.is_zero() {
                out = &out + &fi.wedge(&d)?;
            }
        }
        Ok(out)
    }

    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let (ae, ao) = self.parity_parts();
        let (be, bo) = other.parity_parts();
        let mut out = Self::zero(self.n);
        for (a, pa) in [(&ae, Parity::Even), (&ao, Parity::Odd)] {
            if a.is_zero() {
                continue;
            }
            for (b, pb) in [(&be, Parity::Even), (&bo, Parity::Odd)] {
                if b.is_zero() {
                    continue;
                }
                let both_odd = pa.is_odd() && pb.is_odd();
                for j in 0..self.n {
                    let left = a.apply(&b.comps[j])?;
                    let right = b.apply(&a.comps[j])?;
                    let v = if both_odd { &left + &right } else { &left - &right };
                    out.comps[j] = &out.comps[j] + &v;
                }
            }
        }
        Ok(out)
    }

    /// div(Σ fᵢ∂ᵢ) = Σ ∂ᵢ(fᵢ).
    pub fn divergence(&self) -> ExteriorElement {
        self.comps
            .iter()
            .enumerate()
            .fold(ExteriorElement::zero(self.n), |acc, (i, f)| &acc + &f.partial(i + 1))
    }

    /// Dense coordinates in the monomial basis ξ_I∂_j of W(n); index j·2ⁿ + I.
    pub fn coordinates(&self) -> Vec<Q> {
        let size = 1usize << self.n;
        let mut v = vec![Q::zero(); self.n * size];
        for (j, f) in self.comps.iter().enumerate() {
            for (m, c) in f.terms() {
                v[j * size + m.mask as usize] = c.clone();
            }
        }
        v
    }

    pub fn from_coordinates(n: usize, v: &[Q]) -> Self {
        let size = 1usize << n;
        let mut d = Self::zero(n);
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                d.comps[idx / size].add_term((idx % size) as u32, c.clone());
            }
        }
        d
    }

    /// Lexicographic key of the monomial support, used to order vectors
    /// within a root space.
    pub fn support_key(&self) -> Vec<(usize, Vec<usize>, usize)> {
        let mut key: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        for (j, f) in self.comps.iter().enumerate() {
            for (m, _) in f.terms() {
                key.push((m.degree(), m.indices(), j + 1));
            }
        }
        key.sort();
        key
    }
}

impl fmt::Display for SuperDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut keys: Vec<(u32, Q)> = c.terms().map(|(m, x)| (m.mask, x.clone())).collect();
            keys.sort_by(|a, b| graded_lex(a.0, b.0));
            for (m, x) in keys {
                let mono: String = ExteriorMonomial { mask: m }
                    .indices()
                    .iter()
                    .map(|i| format!("ξ{i}"))
                    .collect();
                let neg = x.is_negative();
                let abs = x.abs();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                first = false;
                if !abs.is_one() {
                    write!(f, "{abs}")?;
                }
                write!(f, "{mono}∂{}", j + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &SuperDerivation {
    type Output = SuperDerivation;
    fn add(self, other: &SuperDerivation) -> SuperDerivation {
        assert_eq!(self.n, other.n, "rank mismatch");
        SuperDerivation {
            n: self.n,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SuperDerivation {
    type Output = SuperDerivation;
    fn sub(self, other: &SuperDerivation) -> SuperDerivation {
        self + &(-other)
    }
}

impl Neg for &SuperDerivation {
    type Output = SuperDerivation;
    fn neg(self) -> SuperDerivation {
        self.scale(&-Q::one())
    }
}

pub fn apply(d: &SuperDerivation, f: &ExteriorElement) -> Result<ExteriorElement> {
    d.apply(f)
}

pub fn supercommutator(a: &SuperDerivation, b: &SuperDerivation) -> Result<SuperDerivation> {
    a.supercommutator(b)
}

pub fn divergence(d: &SuperDerivation) -> ExteriorElement {
    d.divergence()
}

/// D_f = Σ ∂ᵢ(f)∂ᵢ.
pub fn d_f(f: &ExteriorElement) -> SuperDerivation {
    hamiltonian(f, HamiltonianForm::Orthogonal)
}

/// Pairing of odd variables defining the Hamiltonian vector fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// ξᵢ paired with itself: D_f = Σ ∂ᵢ(f)∂ᵢ.
    Orthogonal,
    /// ξ_k paired with ξ_{m+k} (m = ⌊n/2⌋); for odd n the last variable is
    /// paired with itself. The diagonal torus ξ_k∂_k − ξ_{m+k}∂_{m+k} lies in
    /// the resulting algebra.
    Split,
}

impl HamiltonianForm {
    pub fn partner(self, n: usize, i: usize) -> usize {
        match self {
            HamiltonianForm::Orthogonal => i,
            HamiltonianForm::Split => {
                let m = n / 2;
                if i <= m {
                    i + m
                } else if i <= 2 * m {
                    i - m
                } else {
                    i
                }
            }
        }
    }
}

/// Σ ∂ᵢ(f) ∂_{i'} for the pairing i ↔ i'.
pub fn hamiltonian(f: &ExteriorElement, form: HamiltonianForm) -> SuperDerivation {
    let n = f.rank();
    let mut d = SuperDerivation::zero(n);
    for i in 1..=n {
        let j = form.partner(n, i);
        d.comps[j - 1] = &d.comps[j - 1] + &f.partial(i);
    }
    d
}

/// The four Cartan-type families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    W,
    S,
    #[serde(rename = "S_tilde", alias = "S~", alias = "St")]
    STilde,
    H,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::W => "W",
            Family::S => "S",
            Family::STilde => "S_tilde",
            Family::H => "H",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(Family::W),
            "S" | "s" => Ok(Family::S),
            "S_tilde" | "S~" | "St" | "s_tilde" | "S̃" => Ok(Family::STilde),
            "H" | "h" => Ok(Family::H),
            other => Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: Family,
    pub n: usize,
    /// Append ℰ (as h_δ) to the algebra; meaningful for S(n) and H(n).
    #[serde(default)]
    pub extend_with_euler: bool,
}

impl AlgebraSpec {
    pub fn new(family: Family, n: usize) -> Self {
        AlgebraSpec {
            family,
            n,
            extend_with_euler: false,
        }
    }

    pub fn with_euler(mut self) -> Self {
        self.extend_with_euler = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::W => self.n >= 2,
            Family::S => self.n >= 3,
            Family::STilde => self.n >= 4 && self.n % 2 == 0,
            Family::H => self.n >= 4,
        };
        if self.n > 8 {
            return Err(Error::InvalidSpec(format!("n = {} is beyond desk scale", self.n)));
        }
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("{}({}) violates the family rank constraint", self.family, self.n)))
        }
    }

    /// Whether ℰ is adjoined to the Cartan subalgebra used for root decompositions.
    pub fn euler_acts(&self) -> bool {
        matches!(self.family, Family::S | Family::H)
    }

    /// Whether ℰ is an element of the built algebra.
    pub fn euler_in_algebra(&self) -> bool {
        self.extend_with_euler && self.euler_acts()
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.n)?;
        if self.euler_in_algebra() {
            write!(f, "+ℰ")?;
        }
        Ok(())
    }
}

/// A basis vector with its declared ℤ-degree and parity.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    pub element: SuperDerivation,
    pub degree: i32,
    pub parity: Parity,
}

/// A built algebra: a homogeneous ℚ-basis ordered by degree.
#[derive(Debug, Clone)]
pub struct CartanAlgebra {
    pub spec: AlgebraSpec,
    pub basis: Vec<GradedElement>,
    solver: CoordinateSolver,
}

impl CartanAlgebra {
    fn new(spec: AlgebraSpec, basis: Vec<GradedElement>) -> Result<Self> {
        let coords: Vec<Vec<Q>> = basis.iter().map(|g| g.element.coordinates()).collect();
        let solver = CoordinateSolver::new(&coords)
            .ok_or_else(|| Error::InvalidSpec("constructed basis is linearly dependent".into()))?;
        Ok(CartanAlgebra { spec, basis, solver })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.spec.n
    }

    /// Coordinates of `d` in the algebra basis, if `d` lies in the algebra.
    pub fn coordinates(&self, d: &SuperDerivation) -> Option<Vec<Q>> {
        self.solver.solve(&d.coordinates())
    }

    pub fn contains(&self, d: &SuperDerivation) -> bool {
        self.coordinates(d).is_some()
    }

    pub fn combination(&self, coeffs: &[Q]) -> SuperDerivation {
        coeffs
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .fold(SuperDerivation::zero(self.spec.n), |acc, (c, g)| &acc + &g.element.scale(c))
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.basis.iter().map(|g| g.degree).collect();
        d.dedup();
        d
    }
}

/// All ξ_I∂_j of W(n) in the order (|I|, I lexicographic, j).
pub fn w_monomials(n: usize) -> Vec<(u32, usize)> {
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by(|&a, &b| graded_lex(a, b));
    masks
        .into_iter()
        .flat_map(|m| (1..=n).map(move |j| (m, j)))
        .collect()
}

fn graded(element: SuperDerivation, degree: i32) -> GradedElement {
    let parity = Parity::of(degree as i64);
    GradedElement {
        element,
        degree,
        parity,
    }
}

fn build_w(n: usize) -> Vec<GradedElement> {
    w_monomials(n)
        .into_iter()
        .map(|(m, j)| graded(SuperDerivation::monomial(n, m, j), m.count_ones() as i32 - 1))
        .collect()
}

/// Divergence-free part of W(n)_k as a canonical integer basis.
fn s_layer(n: usize, k: i32) -> Vec<SuperDerivation> {
    let layer: Vec<(u32, usize)> = w_monomials(n)
        .into_iter()
        .filter(|(m, _)| m.count_ones() as i32 - 1 == k)
        .collect();
    if layer.is_empty() {
        return Vec::new();
    }
    // divergence maps into Λ^k; rows indexed by target monomials
    let targets: Vec<u32> = (0..(1u32 << n)).filter(|m| m.count_ones() as i32 == k).collect();
    let mut matrix = vec![vec![Q::zero(); layer.len()]; targets.len()];
    for (col, &(m, j)) in layer.iter().enumerate() {
        let div = SuperDerivation::monomial(n, m, j).divergence();
        for (mono, c) in div.terms() {
            let row = targets.iter().position(|&t| t == mono.mask).expect("degree k target");
            matrix[row][col] = c.clone();
        }
    }
    let ker = linalg::kernel(&matrix, layer.len());
    let canon = linalg::canonical_basis(ker);
    canon
        .into_iter()
        .map(|v| {
            v.iter().zip(&layer).filter(|(c, _)| !c.is_zero()).fold(
                SuperDerivation::zero(n),
                |acc, (c, &(m, j))| &acc + &SuperDerivation::monomial(n, m, j).scale(c),
            )
        })
        .collect()
}

fn build_s(n: usize, from: i32) -> Vec<GradedElement> {
    (from..n as i32)
        .flat_map(|k| s_layer(n, k).into_iter().map(move |d| graded(d, k)))
        .collect()
}

fn build_s_tilde(n: usize) -> Vec<GradedElement> {
    let top = ExteriorElement::from_mask(n, (1u32 << n) - 1, Q::one());
    let one_plus_top = &ExteriorElement::one(n) + &top;
    let mut basis: Vec<GradedElement> = (1..=n)
        .map(|i| GradedElement {
            element: SuperDerivation::term(one_plus_top.clone(), i),
            degree: -1,
            parity: Parity::Odd,
        })
        .collect();
    basis.extend(build_s(n, 0));
    basis
}

fn build_h(n: usize) -> Result<Vec<GradedElement>> {
    let form = HamiltonianForm::Split;
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by(|&a, &b| graded_lex(a, b));
    let tilde: Vec<SuperDerivation> = masks
        .iter()
        .map(|&m| hamiltonian(&ExteriorElement::from_mask(n, m, Q::one()), form))
        .collect();
    let mut brackets = Vec::new();
    for (i, a) in tilde.iter().enumerate() {
        for b in &tilde[i..] {
            let c = a.supercommutator(b)?;
            if !c.is_zero() {
                brackets.push(c.coordinates());
            }
        }
    }
    let derived = linalg::canonical_basis(brackets);
    let target_dim = derived.len();
    let span = CoordinateSolver::new(&derived).expect("rref rows are independent");
    let mut chosen: Vec<(u32, SuperDerivation)> = Vec::new();
    let mut chosen_coords: Vec<Vec<Q>> = Vec::new();
    for (&m, d) in masks.iter().zip(&tilde) {
        let c = d.coordinates();
        if span.solve(&c).is_none() {
            continue;
        }
        let mut trial = chosen_coords.clone();
        trial.push(c.clone());
        if linalg::rank(&trial) == trial.len() {
            chosen_coords = trial;
            chosen.push((m, d.clone()));
        }
        if chosen.len() == target_dim {
            break;
        }
    }
    if chosen.len() != target_dim {
        return Err(Error::InvalidSpec(format!(
            "derived algebra of H̃({n}) is not spanned by D_f images ({} of {target_dim})",
            chosen.len()
        )));
    }
    Ok(chosen
        .into_iter()
        .map(|(m, d)| graded(d, m.count_ones() as i32 - 2))
        .collect())
}

/// A homogeneous ℚ-basis of the requested algebra, ordered by ℤ-degree.
pub fn build_algebra(spec: AlgebraSpec) -> Result<CartanAlgebra> {
    spec.validate()?;
    let n = spec.n;
    let mut basis = match spec.family {
        Family::W => build_w(n),
        Family::S => build_s(n, -1),
        Family::STilde => build_s_tilde(n),
        Family::H => build_h(n)?,
    };
    if spec.euler_in_algebra() {
        basis.push(graded(SuperDerivation::euler(n), 0));
    }
    // stable sort keeps the within-degree order of each construction
    basis.sort_by_key(|g| g.degree);
    CartanAlgebra::new(spec, basis)
}

/// A homogeneous element with small random integer coefficients; used by
/// the property suites.
pub fn random_homogeneous<R: rand::Rng>(alg: &CartanAlgebra, parity: Parity, rng: &mut R) -> SuperDerivation {
    let mut coeffs = vec![Q::zero(); alg.dim()];
    let idx: Vec<usize> = (0..alg.dim()).filter(|&i| alg.basis[i].parity == parity).collect();
    let terms = rng.gen_range(1..=3.min(idx.len()).max(1));
    for _ in 0..terms {
        let i = idx[rng.gen_range(0..idx.len())];
        coeffs[i] += q(rng.gen_range(-3..=3));
    }
    alg.combination(&coeffs)
}

/// Outcome of the structural checks on a built algebra.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub algebra: String,
    pub jacobi_triples: usize,
    pub jacobi_failures: usize,
    pub pairs: usize,
    pub closure_failures: usize,
    /// Pairs whose bracket is not homogeneous of the summed degree and parity.
    pub grading_failures: usize,
    /// Basis vectors whose ℤ-degree and parity disagree mod 2.
    pub parity_mismatches: usize,
    /// Brackets out of S̃(n)_{−1} that break additivity of degree. These
    /// are expected and not counted as grading failures.
    pub minus_one_violations: usize,
    pub first_failure: Option<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        let exempt_ok = self.algebra.starts_with("S_tilde") == (self.minus_one_violations > 0);
        self.jacobi_failures == 0
            && self.closure_failures == 0
            && self.grading_failures == 0
            && self.parity_mismatches == 0
            && exempt_ok
    }
}

/// Super Jacobi on random homogeneous triples, then closure and grading on
/// all basis pairs.
pub fn structure_check<R: rand::Rng>(alg: &CartanAlgebra, triples: usize, rng: &mut R) -> StructureReport {
    let mut rep = StructureReport {
        algebra: alg.spec.to_string(),
        jacobi_triples: triples,
        jacobi_failures: 0,
        pairs: 0,
        closure_failures: 0,
        grading_failures: 0,
        parity_mismatches: 0,
        minus_one_violations: 0,
        first_failure: None,
    };
    let note = |rep: &mut StructureReport, msg: String| {
        if rep.first_failure.is_none() {
            rep.first_failure = Some(msg);
        }
    };
    let br = |a: &SuperDerivation, b: &SuperDerivation| a.supercommutator(b).expect("same rank");
    let pick = |rng: &mut R| if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    for _ in 0..triples {
        let (px, py, pz) = (pick(rng), pick(rng), pick(rng));
        let x = random_homogeneous(alg, px, rng);
        let y = random_homogeneous(alg, py, rng);
        let z = random_homogeneous(alg, pz, rng);
        let lhs = br(&x, &br(&y, &z));
        let mut rhs = &br(&br(&x, &y), &z) + &br(&y, &br(&x, &z));
        if px.is_odd() && py.is_odd() {
            rhs = &br(&br(&x, &y), &z) - &br(&y, &br(&x, &z));
        }
        if !(&lhs - &rhs).is_zero() {
            rep.jacobi_failures += 1;
            note(&mut rep, format!("Jacobi fails on [{x}, [{y}, {z}]]"));
        }
    }
    let tilde = alg.spec.family == Family::STilde;
    for g in &alg.basis {
        if Parity::of(g.degree as i64) != g.parity {
            rep.parity_mismatches += 1;
            note(&mut rep, format!("{} has degree {} but parity {:?}", g.element, g.degree, g.parity));
        }
    }
    for a in &alg.basis {
        for b in &alg.basis {
            rep.pairs += 1;
            let c = br(&a.element, &b.element);
            if c.is_zero() {
                continue;
            }
            let Some(coords) = alg.coordinates(&c) else {
                rep.closure_failures += 1;
                note(&mut rep, format!("[{}, {}] leaves the algebra", a.element, b.element));
                continue;
            };
            let deg = a.degree + b.degree;
            let parity = a.parity + b.parity;
            let homogeneous = coords
                .iter()
                .zip(&alg.basis)
                .all(|(x, g)| x.is_zero() || (g.degree == deg && g.parity == parity));
            if homogeneous {
                continue;
            }
            if tilde && (a.degree == -1 || b.degree == -1) {
                rep.minus_one_violations += 1;
            } else {
                rep.grading_failures += 1;
                note(&mut rep, format!("[{}, {}] is not homogeneous of degree {deg}", a.element, b.element));
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(n: usize, idx: &[usize]) -> ExteriorElement {
        ExteriorElement::monomial(n, idx)
    }

    fn mono_der(n: usize, idx: &[usize], j: usize) -> SuperDerivation {
        SuperDerivation::term(xi(n, idx), j)
    }

    #[test]
    fn wedge_signs() {
        let n = 3;
        assert_eq!(xi(n, &[2]).wedge(&xi(n, &[1])).unwrap(), xi(n, &[1, 2]).scale(&q(-1)));
        assert!(xi(n, &[1]).wedge(&xi(n, &[1])).unwrap().is_zero());
        assert_eq!(xi(n, &[1, 2]).wedge(&xi(n, &[3])).unwrap(), xi(n, &[1, 2, 3]));
        assert_eq!(xi(n, &[1, 3]).wedge(&xi(n, &[2])).unwrap(), xi(n, &[1, 2, 3]).scale(&q(-1)));
        assert_eq!(
            xi(3, &[1]).wedge(&xi(2, &[1])),
            Err(Error::RankMismatch(3, 2))
        );
    }

    #[test]
    fn apply_examples() {
        let n = 3;
        let d1 = SuperDerivation::partial(n, 1);
        assert_eq!(d1.apply(&xi(n, &[1])).unwrap(), ExteriorElement::one(n));
        assert_eq!(d1.apply(&xi(n, &[1, 2])).unwrap(), xi(n, &[2]));
        // ξ₁∂₂(ξ₂ξ₃) = ξ₁ξ₃
        assert_eq!(mono_der(n, &[1], 2).apply(&xi(n, &[2, 3])).unwrap(), xi(n, &[1, 3]));
    }

    #[test]
    fn bracket_examples() {
        let n = 3;
        let a = mono_der(n, &[1], 2);
        let b = mono_der(n, &[2], 1);
        let expect = &mono_der(n, &[1], 1) - &mono_der(n, &[2], 2);
        assert_eq!(a.supercommutator(&b).unwrap(), expect);
        let d1 = SuperDerivation::partial(n, 1);
        assert!(d1.supercommutator(&d1).unwrap().is_zero());
        // both odd, so the bracket is the anticommutator of the operators
        let a = mono_der(n, &[1, 2], 3);
        let c = a.supercommutator(&d1).unwrap();
        for mask in 0..8u32 {
            let m = ExteriorElement::from_mask(n, mask, Q::one());
            let composed = &a.apply(&d1.apply(&m).unwrap()).unwrap() + &d1.apply(&a.apply(&m).unwrap()).unwrap();
            assert_eq!(c.apply(&m).unwrap(), composed);
        }
        assert_eq!(c, mono_der(n, &[2], 3));
    }

    #[test]
    fn divergence_examples() {
        let n = 2;
        assert!(mono_der(n, &[1], 2).divergence().is_zero());
        assert_eq!(mono_der(n, &[1], 1).divergence(), ExteriorElement::one(n));
        let d = &mono_der(n, &[1], 1) - &mono_der(n, &[2], 2);
        assert!(d.divergence().is_zero());
    }

    #[test]
    fn d_f_examples() {
        let n = 4;
        let d = d_f(&xi(n, &[1, 2]));
        assert_eq!(d, &mono_der(n, &[2], 1) - &mono_der(n, &[1], 2));
        assert!(d_f(&ExteriorElement::one(n)).is_zero());
        assert_eq!(d_f(&xi(n, &[1])), SuperDerivation::partial(n, 1));
    }

    #[test]
    fn split_form_contains_torus() {
        let n = 4;
        let d = hamiltonian(&xi(n, &[1, 3]), HamiltonianForm::Split);
        assert_eq!(d, &mono_der(n, &[3], 3) - &mono_der(n, &[1], 1));
    }

    #[test]
    fn family_constraints() {
        assert!(AlgebraSpec::new(Family::W, 1).validate().is_err());
        assert!(AlgebraSpec::new(Family::S, 2).validate().is_err());
        assert!(AlgebraSpec::new(Family::STilde, 5).validate().is_err());
        assert!(AlgebraSpec::new(Family::H, 3).validate().is_err());
        assert!(AlgebraSpec::new(Family::H, 4).validate().is_ok());
    }

    #[test]
    fn dimensions() {
        let dim = |f, n| build_algebra(AlgebraSpec::new(f, n)).unwrap().dim();
        assert_eq!(dim(Family::W, 2), 8);
        assert_eq!(dim(Family::W, 3), 24);
        assert_eq!(dim(Family::S, 3), 17);
        assert_eq!(dim(Family::STilde, 4), 49);
        assert_eq!(dim(Family::H, 4), 14);
        assert_eq!(build_algebra(AlgebraSpec::new(Family::S, 3).with_euler()).unwrap().dim(), 18);
    }

    #[test]
    fn s_basis_is_divergence_free() {
        let alg = build_algebra(AlgebraSpec::new(Family::S, 3)).unwrap();
        for g in &alg.basis {
            assert!(g.element.divergence().is_zero(), "{}", g.element);
        }
    }

    #[test]
    fn json_spec() {
        let s: AlgebraSpec = serde_json::from_str(r#"{"family":"W","n":3,"extend_with_euler":false}"#).unwrap();
        assert_eq!(s, AlgebraSpec::new(Family::W, 3));
        let t: AlgebraSpec = serde_json::from_str(r#"{"family":"S_tilde","n":4}"#).unwrap();
        assert_eq!(t.family, Family::STilde);
    }

    #[test]
    fn structure_check_on_small_algebras() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for spec in [AlgebraSpec::new(Family::W, 2), AlgebraSpec::new(Family::S, 3), AlgebraSpec::new(Family::STilde, 4)] {
            let alg = build_algebra(spec).unwrap();
            let rep = structure_check(&alg, 50, &mut rng);
            assert!(rep.passed(), "{rep:?}");
        }
    }
}
