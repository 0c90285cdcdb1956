//! Exact integer and modular linear algebra.
//!
//! Everything here is built on [`smith_normal_form`]. Work modulo a composite
//! `k` is done by lifting to the integers and appending `k * I` columns to the
//! relation matrix, so no division in `Z/k` is ever attempted.

mod matrix;
mod smith;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use matrix::{divisible, reduce, reduce_vec, to_big, IntegerMatrix};
pub use smith::{smith_normal_form, SmithDecomposition};

use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_t` in
/// invariant-factor form (`1 < d_1 | d_2 | … | d_t`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub free_rank: usize,
    #[serde(with = "bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl GroupPresentation {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_orders(&[BigInt::from(order)])
    }

    /// Canonicalizes a direct sum of cyclic groups; an order of `0` stands for `Z`
    /// and orders of `1` are dropped.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|d| d.is_zero()).count();
        let finite: Vec<BigInt> = orders.iter().filter(|d| !d.is_zero()).map(|d| d.abs()).collect();
        let n = finite.len();
        let mut diag = IntegerMatrix::zeros(n, n);
        for (i, d) in finite.into_iter().enumerate() {
            diag.set(i, i, d);
        }
        let torsion = smith_normal_form(&diag).torsion();
        Self { free_rank, torsion }
    }

    /// Cyclic orders of the summands, free summands (order `0`) first.
    pub fn orders(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        finite_order(self)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.orders();
        orders.extend(other.orders());
        Self::from_orders(&orders)
    }

    /// Number of summands in the canonical decomposition.
    pub fn summand_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Order of a finitely generated abelian group; `None` when it is infinite.
pub fn finite_order(g: &GroupPresentation) -> Option<BigInt> {
    if g.free_rank > 0 {
        return None;
    }
    Some(g.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
}

/// Solves `m x = b` over `Z` (`modulus = 0`) or `m x ≡ b (mod k)`.
///
/// The modular case appends `k * I` to `m` and solves over the integers; the
/// returned witness is reduced into `[0, k)`.
pub fn solve_linear(m: &IntegerMatrix, b: &[BigInt], modulus: u64) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for a matrix with {} rows",
            b.len(),
            m.rows()
        )));
    }
    if modulus == 0 {
        return Ok(solve_integral(m, b));
    }
    let k = BigInt::from(modulus);
    let augmented = m.hcat(&IntegerMatrix::scalar(m.rows(), &k));
    Ok(solve_integral(&augmented, b).map(|x| reduce_vec(&x[..m.cols()], &k)))
}

fn solve_integral(m: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(m);
    let c = s.u.mul_vec(b).expect("shape checked by caller");
    let mut y = vec![BigInt::zero(); m.cols()];
    for (j, cj) in c.iter().enumerate() {
        if j < s.rank {
            let (q, r) = cj.div_mod_floor(&s.diagonal[j]);
            if !r.is_zero() {
                return None;
            }
            y[j] = q;
        } else if !cj.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y).expect("shape"))
}

/// Columns generate the kernel of `m` over `Z` (a basis when `modulus = 0`) or
/// the kernel of `m` acting on `(Z/k)^cols`.
pub fn kernel_basis(m: &IntegerMatrix, modulus: u64) -> IntegerMatrix {
    let s = smith_normal_form(m);
    let k = BigInt::from(modulus);
    let mut columns = Vec::new();
    for j in 0..m.cols() {
        let col = s.v.column(j);
        if j < s.rank {
            if modulus == 0 {
                continue;
            }
            let scale = &k / s.diagonal[j].gcd(&k);
            columns.push(col.iter().map(|x| x * &scale).collect());
        } else {
            columns.push(col);
        }
    }
    IntegerMatrix::from_columns(m.cols(), &columns)
}

/// Presentation of `Z^rows / im(m)` together with the map from abstract
/// generators to the ambient basis.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// Column `i` is an ambient vector whose coset is the `i`-th generator
    /// (free generators first, then torsion generators in invariant-factor order).
    pub generator_map: IntegerMatrix,
    u: IntegerMatrix,
    summand_rows: Vec<usize>,
    orders: Vec<BigInt>,
}

impl Cokernel {
    pub fn presentation(&self) -> GroupPresentation {
        GroupPresentation {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// Coordinates of the coset of `x` in the generator basis; torsion
    /// coordinates are reduced modulo their orders.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self.u.mul_vec(x)?;
        Ok(self
            .summand_rows
            .iter()
            .zip(&self.orders)
            .map(|(&r, d)| reduce(&c[r], d))
            .collect())
    }
}

pub fn cokernel_presentation(m: &IntegerMatrix) -> Cokernel {
    let s = smith_normal_form(m);
    let rows = m.rows();
    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for j in 0..rows {
        let d = if j < s.rank {
            s.diagonal[j].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            free.push(j);
        } else if !d.is_one() {
            torsion.push((j, d));
        }
    }
    let mut summand_rows = free.clone();
    let mut orders = vec![BigInt::zero(); free.len()];
    for (j, d) in &torsion {
        summand_rows.push(*j);
        orders.push(d.clone());
    }
    let generator_map = s.u_inv.select_cols(&summand_rows);
    Cokernel {
        free_rank: free.len(),
        torsion: torsion.into_iter().map(|(_, d)| d).collect(),
        generator_map,
        u: s.u,
        summand_rows,
        orders,
    }
}

/// Diagonal relation matrix for `⊕ Z/orders[i]` (order `0` contributes no relation).
pub fn relations(orders: &[BigInt]) -> IntegerMatrix {
    let mut d = IntegerMatrix::zeros(orders.len(), orders.len());
    for (i, o) in orders.iter().enumerate() {
        d.set(i, i, o.clone());
    }
    d
}

/// Isomorphism type of the subgroup of `⊕ Z/orders[i]` generated by the columns of `gens`.
pub fn subgroup_presentation(orders: &[BigInt], gens: &IntegerMatrix) -> GroupPresentation {
    let g = gens.cols();
    let syzygies = kernel_basis(&gens.hcat(&relations(orders)), 0);
    let rel = syzygies.select_rows(&(0..g).collect::<Vec<_>>());
    cokernel_presentation(&rel).presentation()
}

/// Generators (as columns in source coordinates) of the kernel of the
/// homomorphism `⊕ Z/src[j] → ⊕ Z/tgt[i]` given by `map`.
pub fn map_kernel(src: &[BigInt], tgt: &[BigInt], map: &IntegerMatrix) -> IntegerMatrix {
    let m = src.len();
    let k = kernel_basis(&map.hcat(&relations(tgt)), 0);
    k.select_rows(&(0..m).collect::<Vec<_>>())
}

/// Whether `x` lies in the subgroup of `⊕ Z/orders[i]` generated by `gens`.
pub fn subgroup_contains(orders: &[BigInt], gens: &IntegerMatrix, x: &[BigInt]) -> bool {
    let system = gens.hcat(&relations(orders));
    solve_linear(&system, x, 0).expect("shapes agree").is_some()
}

/// Rank over `F_p` of an integer matrix, read off the Smith diagonal.
pub fn rank_mod_prime(m: &IntegerMatrix, p: u64) -> usize {
    let p = BigInt::from(p);
    smith_normal_form(m)
        .diagonal
        .iter()
        .filter(|d| !d.is_zero() && !divisible(d, &p))
        .count()
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        to_big(v)
    }

    #[test]
    fn solve_examples() {
        let two = IntegerMatrix::from_i64(&[&[2]]);
        assert_eq!(solve_linear(&two, &big(&[3]), 0).unwrap(), None);
        assert_eq!(solve_linear(&two, &big(&[3]), 3).unwrap(), Some(big(&[0])));
        let three = IntegerMatrix::from_i64(&[&[3]]);
        assert_eq!(solve_linear(&three, &big(&[15]), 0).unwrap(), Some(big(&[5])));
        assert!(solve_linear(&three, &big(&[1, 2]), 0).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntegerMatrix::zeros(2, 2), 0), IntegerMatrix::identity(2));
        assert_eq!(
            kernel_basis(&IntegerMatrix::from_i64(&[&[3]]), 3),
            IntegerMatrix::from_i64(&[&[1]])
        );
        let k = kernel_basis(&IntegerMatrix::from_i64(&[&[1, 1]]), 0);
        assert_eq!(k.cols(), 1);
        let c = k.column(0);
        assert!(c == big(&[1, -1]) || c == big(&[-1, 1]));
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_presentation(&IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!((c.free_rank, c.torsion.clone()), (0, big(&[6])));
        let c = cokernel_presentation(&IntegerMatrix::zeros(3, 0));
        assert_eq!((c.free_rank, c.torsion.len()), (3, 0));
        let c = cokernel_presentation(&IntegerMatrix::from_i64(&[&[3]]));
        assert_eq!((c.free_rank, c.torsion.clone()), (0, big(&[3])));
        // The generator of Z/3 has coordinate 1; its double has coordinate 2.
        let g = c.generator_map.column(0);
        assert_eq!(c.coordinates(&g).unwrap(), big(&[1]));
    }

    #[test]
    fn finite_order_examples() {
        assert_eq!(
            finite_order(&GroupPresentation::from_orders(&big(&[3, 3]))),
            Some(BigInt::from(9))
        );
        assert_eq!(finite_order(&GroupPresentation::free(1)), None);
        assert_eq!(finite_order(&GroupPresentation::trivial()), Some(BigInt::one()));
    }

    #[test]
    fn presentation_display_and_canonical_form() {
        let g = GroupPresentation::from_orders(&big(&[0, 2, 3, 1, 0]));
        assert_eq!(g.to_string(), "Z^2 ⊕ Z/6");
        assert_eq!(GroupPresentation::from_orders(&big(&[4, 6])).torsion, big(&[2, 12]));
        assert_eq!(GroupPresentation::trivial().to_string(), "0");
        assert_eq!(GroupPresentation::free(1).to_string(), "Z");
    }

    #[test]
    fn subgroup_helpers() {
        // <2> inside Z/6 is Z/3; <(1,1)> inside Z/2 ⊕ Z/4 is Z/4.
        let gens = IntegerMatrix::from_i64(&[&[2]]);
        assert_eq!(subgroup_presentation(&big(&[6]), &gens), GroupPresentation::cyclic(3));
        let gens = IntegerMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(
            subgroup_presentation(&big(&[2, 4]), &gens),
            GroupPresentation::cyclic(4)
        );
        assert!(subgroup_contains(&big(&[2, 4]), &gens, &big(&[1, 3])));
        assert!(!subgroup_contains(&big(&[2, 4]), &gens, &big(&[1, 0])));
        // x -> 2x on Z/4 has kernel {0, 2}.
        let k = map_kernel(&big(&[4]), &big(&[4]), &IntegerMatrix::from_i64(&[&[2]]));
        assert_eq!(subgroup_presentation(&big(&[4]), &k), GroupPresentation::cyclic(2));
    }

    #[test]
    fn rank_over_prime_field() {
        let m = IntegerMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank_mod_prime(&m, 3), 1);
        assert_eq!(rank_mod_prime(&IntegerMatrix::from_i64(&[&[3, 0], &[0, 1]]), 3), 1);
    }
}
