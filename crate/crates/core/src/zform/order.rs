//! Total orders (≼, R ∪ I) and (≾, 𝔅).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chevalley::{BasisKind, ChevalleyBasis};
use crate::exterior::Parity;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedOrder {
    /// By height, hᵢ after the height-zero roots.
    Height,
    /// R⁻ ≼ I ≼ R⁺.
    Triangular,
    /// R⁺ ≼ I ≼ R⁻, the exact reverse of `Triangular`.
    Reverse,
    /// (R_0̄ ∪ I) ≼ R_1̄, triangular inside each block.
    EvenFirst,
    /// (R₀ ∪ I) ≼ even roots of positive height ≼ everything else.
    Corollary3,
}

impl NamedOrder {
    pub const ALL: [NamedOrder; 5] = [
        NamedOrder::Height,
        NamedOrder::Triangular,
        NamedOrder::Reverse,
        NamedOrder::EvenFirst,
        NamedOrder::Corollary3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedOrder::Height => "height",
            NamedOrder::Triangular => "triangular",
            NamedOrder::Reverse => "reverse",
            NamedOrder::EvenFirst => "even-first",
            NamedOrder::Corollary3 => "corollary3",
        }
    }
}

impl fmt::Display for NamedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "height" | "default" => NamedOrder::Height,
            "triangular" => NamedOrder::Triangular,
            "reverse" => NamedOrder::Reverse,
            "even-first" | "corollary1" | "corollary2" => NamedOrder::EvenFirst,
            "corollary3" => NamedOrder::Corollary3,
            other => return Err(Error::UnknownName(format!("order {other}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AOrder {
    #[default]
    Natural,
    Reversed,
}

impl FromStr for AOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "natural" => Ok(AOrder::Natural),
            "reversed" => Ok(AOrder::Reversed),
            other => Err(Error::UnknownName(format!("A-order {other}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Order {
    pub named: NamedOrder,
    pub a_order: AOrder,
    cartan_rank: Vec<usize>,
    root_rank: Vec<usize>,
    b_rank: Vec<usize>,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct ItemKey {
    primary: Vec<i64>,
    tie: usize,
}

impl Order {
    pub fn new(named: NamedOrder, a_order: AOrder, cb: &ChevalleyBasis, dim_a: usize) -> Self {
        let rs = &cb.rs;
        let l = cb.cartan_len();
        // items: hᵢ for i < l, then roots
        let tri = |item: usize| -> Vec<i64> {
            if item < l {
                return vec![1, 0];
            }
            let r = &rs.roots[item - l];
            let group = if rs.positive[item - l] { 2 } else { 0 };
            let mut v = vec![group, r.height as i64];
            v.extend(&r.weight);
            v
        };
        let key = |item: usize| -> ItemKey {
            let t = tri(item);
            let primary = match named {
                NamedOrder::Triangular => t,
                NamedOrder::Reverse => t.iter().map(|x| -x).collect(),
                NamedOrder::Height => {
                    if item < l {
                        vec![0, 1]
                    } else {
                        let r = &rs.roots[item - l];
                        let mut v = vec![r.height as i64, 0];
                        v.extend(&r.weight);
                        v
                    }
                }
                NamedOrder::EvenFirst => {
                    let odd = item >= l && rs.roots[item - l].parity == Parity::Odd;
                    let mut v = vec![odd as i64];
                    v.extend(t);
                    v
                }
                NamedOrder::Corollary3 => {
                    let class = if item < l {
                        0
                    } else {
                        let r = &rs.roots[item - l];
                        match (r.parity, r.height) {
                            (Parity::Even, 0) => 0,
                            (Parity::Even, h) if h > 0 => 1,
                            (Parity::Even, _) => 2,
                            (Parity::Odd, _) => 3,
                        }
                    };
                    let mut v = vec![class];
                    v.extend(t);
                    v
                }
            };
            let tie = if named == NamedOrder::Reverse { usize::MAX - item } else { item };
            ItemKey { primary, tie }
        };
        let n_items = l + rs.roots.len();
        let mut items: Vec<usize> = (0..n_items).collect();
        items.sort_by_key(|&i| key(i));
        let mut rank = vec![0; n_items];
        for (pos, &item) in items.iter().enumerate() {
            rank[item] = pos;
        }
        let b_rank = match a_order {
            AOrder::Natural => (0..dim_a).collect(),
            AOrder::Reversed => (0..dim_a).rev().collect(),
        };
        Order {
            named,
            a_order,
            cartan_rank: rank[..l].to_vec(),
            root_rank: rank[l..].to_vec(),
            b_rank,
        }
    }

    pub fn cartan_rank(&self, i: usize) -> usize {
        self.cartan_rank[i]
    }

    pub fn root_rank(&self, r: usize) -> usize {
        self.root_rank[r]
    }

    pub fn b_rank(&self, b: usize) -> usize {
        self.b_rank[b]
    }

    /// Alphabet key of the letter (basis element `lie`) ⊗ (A-basis `a`).
    pub fn letter_key(&self, cb: &ChevalleyBasis, lie: usize, a: usize) -> (usize, usize, usize) {
        match cb.kinds[lie] {
            BasisKind::Cartan(i) => (self.cartan_rank(i), self.b_rank(a), 0),
            BasisKind::Root { root, k } => (self.root_rank(root), self.b_rank(a), k),
        }
    }

    /// Items of R ∪ I in increasing order, as labels.
    pub fn describe(&self, cb: &ChevalleyBasis) -> Vec<String> {
        let l = cb.cartan_len();
        let mut items: Vec<(usize, String)> = (0..l)
            .map(|i| (self.cartan_rank[i], cb.rs.cartan.labels[i].clone()))
            .chain(cb.rs.roots.iter().enumerate().map(|(r, d)| (self.root_rank[r], d.label.clone())))
            .collect();
        items.sort();
        items.into_iter().map(|(_, s)| s).collect()
    }
}
