//! Homology with `Z` and `Z/k` coefficients.
//!
//! For degree `n` and modulus `k` the cycle lattice is
//! `Z = { z : ∂_n z ≡ 0 (mod k) }` (for `k = 0`, the integral kernel) and the
//! boundary lattice is the column span of `[∂_{n+1} | k I]`. Both are expressed
//! in a basis read off the Smith form of `∂_n`, and the Smith form of the
//! resulting relation matrix gives invariant factors and generators at once.

mod exact;
mod sequences;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactalg::{reduce, reduce_vec, smith_normal_form, GroupPresentation, IntegerMatrix};

pub(crate) use exact::record_checks;
pub use exact::{check_exactness, ExactSequence, GroupMap, NodeCheck};
pub use sequences::{connecting_pair, les_pair_report, mayer_vietoris_connecting, mayer_vietoris_report, Splitting};

/// Basis of the cycle lattice of `∂_n` at a modulus, with inverse coordinates.
#[derive(Clone, Debug)]
struct CycleLattice {
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
    /// `(column of v, scale)` for each basis vector.
    basis: Vec<(usize, BigInt)>,
    /// Basis position of each column of `v`, or `None` when that direction is not a cycle.
    position: Vec<Option<usize>>,
}

impl CycleLattice {
    fn new(boundary: &IntegerMatrix, modulus: u64) -> Self {
        let s = smith_normal_form(boundary);
        let k = BigInt::from(modulus);
        let mut basis = Vec::new();
        let mut position = Vec::new();
        for j in 0..boundary.cols() {
            if j < s.rank {
                if modulus == 0 {
                    position.push(None);
                    continue;
                }
                position.push(Some(basis.len()));
                basis.push((j, &k / s.diagonal[j].gcd(&k)));
            } else {
                position.push(Some(basis.len()));
                basis.push((j, BigInt::one()));
            }
        }
        Self {
            v: s.v,
            v_inv: s.v_inv,
            basis,
            position,
        }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn vector(&self, idx: usize) -> Vec<BigInt> {
        let (col, scale) = &self.basis[idx];
        self.v.column(*col).iter().map(|x| x * scale).collect()
    }

    /// Coordinates of a lattice element; `None` if `z` is not in the lattice.
    fn coordinates(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.v_inv.mul_vec(z).ok()?;
        let mut y = vec![BigInt::zero(); self.len()];
        for (j, wj) in w.iter().enumerate() {
            match self.position[j] {
                None => {
                    if !wj.is_zero() {
                        return None;
                    }
                }
                Some(p) => {
                    let (q, r) = wj.div_mod_floor(&self.basis[p].1);
                    if !r.is_zero() {
                        return None;
                    }
                    y[p] = q;
                }
            }
        }
        Some(y)
    }
}

/// `H_n(C; Z/k)` (or `H_n(C; Z)` when `modulus = 0`) with explicit cycle generators.
///
/// Summands are ordered free first, then torsion in invariant-factor order;
/// `generators[i]` represents summand `i`. With `modulus > 0` every summand is
/// finite (its order divides `k`) and generators are reduced into `[0, k)`.
/// Generators are canonical for this implementation but not unique.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: i64,
    pub modulus: u64,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub generators: Vec<Vec<BigInt>>,
    boundary: IntegerMatrix,
    lattice: CycleLattice,
    relation_u: IntegerMatrix,
    summand_rows: Vec<usize>,
    orders: Vec<BigInt>,
}

impl HomologyGroup {
    fn compute(c: &ChainComplex, n: i64, modulus: u64) -> Self {
        let boundary = c.boundary(n).into_owned();
        let lattice = CycleLattice::new(&boundary, modulus);
        let k = BigInt::from(modulus);
        let cells = c.rank(n);

        let mut relation_cols: Vec<Vec<BigInt>> = c
            .boundary(n + 1)
            .columns()
            .iter()
            .map(|b| lattice.coordinates(b).expect("boundaries are cycles"))
            .collect();
        if modulus > 0 {
            for i in 0..cells {
                let mut e = vec![BigInt::zero(); cells];
                e[i] = k.clone();
                relation_cols.push(lattice.coordinates(&e).expect("k times a cell is a mod-k cycle"));
            }
        }
        let relations = IntegerMatrix::from_columns(lattice.len(), &relation_cols);
        let s = smith_normal_form(&relations);

        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for j in 0..lattice.len() {
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

        let generators = summand_rows
            .iter()
            .map(|&j| {
                let coeffs = s.u_inv.column(j);
                let mut g = vec![BigInt::zero(); cells];
                for (idx, a) in coeffs.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (gi, x) in g.iter_mut().zip(lattice.vector(idx)) {
                        *gi += a * x;
                    }
                }
                reduce_vec(&g, &k)
            })
            .collect();

        Self {
            degree: n,
            modulus,
            free_rank: free.len(),
            torsion: torsion.into_iter().map(|(_, d)| d).collect(),
            generators,
            boundary,
            lattice,
            relation_u: s.u,
            summand_rows,
            orders,
        }
    }

    pub fn presentation(&self) -> GroupPresentation {
        GroupPresentation {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    /// Cyclic orders of the summands (`0` for `Z`), aligned with `generators`.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.presentation().order()
    }

    /// Number of cells in degree `n`, i.e. the length of chain vectors.
    pub fn chain_len(&self) -> usize {
        self.boundary.cols()
    }

    pub fn is_cycle(&self, z: &[BigInt]) -> Result<bool> {
        let b = self.boundary.mul_vec(z)?;
        let k = BigInt::from(self.modulus);
        Ok(b.iter().all(|x| crate::exactalg::divisible(x, &k)))
    }

    /// Coordinates of `[z]`; fails with the offending boundary if `z` is not a cycle.
    pub fn coordinates(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        if z.len() != self.chain_len() {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} in degree {} with {} cells",
                z.len(),
                self.degree,
                self.chain_len()
            )));
        }
        if !self.is_cycle(z)? {
            return Err(Error::NotACycle {
                boundary: self.boundary.mul_vec(z)?,
            });
        }
        let y = self
            .lattice
            .coordinates(z)
            .ok_or_else(|| Error::Internal("cycle outside its own lattice".into()))?;
        let c = self.relation_u.mul_vec(&y)?;
        Ok(self
            .summand_rows
            .iter()
            .zip(&self.orders)
            .map(|(&r, d)| reduce(&c[r], d))
            .collect())
    }

    /// Reduces coordinates modulo the summand orders.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords.iter().zip(&self.orders).map(|(x, d)| reduce(x, d)).collect()
    }

    /// `Σ coords[i] * generators[i]`.
    pub fn representative(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a group with {} summands",
                coords.len(),
                self.rank()
            )));
        }
        let mut z = vec![BigInt::zero(); self.chain_len()];
        for (c, g) in coords.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            for (zi, gi) in z.iter_mut().zip(g) {
                *zi += c * gi;
            }
        }
        Ok(z)
    }

    /// Matrix whose columns are the coordinates of the given cycles.
    pub fn coordinate_matrix<'a>(&self, cycles: impl IntoIterator<Item = &'a Vec<BigInt>>) -> Result<IntegerMatrix> {
        let cols = cycles
            .into_iter()
            .map(|z| self.coordinates(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerMatrix::from_columns(self.rank(), &cols))
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.presentation())
    }
}

/// An element of a homology group given by coordinates over its summands.
#[derive(Clone, Debug)]
pub struct HomologyClass {
    pub group: Arc<HomologyGroup>,
    pub coordinates: Vec<BigInt>,
}

impl HomologyClass {
    pub fn new(group: Arc<HomologyGroup>, coordinates: Vec<BigInt>) -> Result<Self> {
        if coordinates.len() != group.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a group with {} summands",
                coordinates.len(),
                group.rank()
            )));
        }
        let coordinates = group.normalize(&coordinates);
        Ok(Self { group, coordinates })
    }

    pub fn zero(group: Arc<HomologyGroup>) -> Self {
        let coordinates = vec![BigInt::zero(); group.rank()];
        Self { group, coordinates }
    }

    /// The `i`-th generator of `group`.
    pub fn basis(group: Arc<HomologyGroup>, i: usize) -> Self {
        let mut coordinates = vec![BigInt::zero(); group.rank()];
        coordinates[i] = BigInt::one();
        Self { group, coordinates }
    }

    pub fn from_cycle(group: Arc<HomologyGroup>, z: &[BigInt]) -> Result<Self> {
        let coordinates = group.coordinates(z)?;
        Ok(Self { group, coordinates })
    }

    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> i64 {
        self.group.degree
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn representative(&self) -> Vec<BigInt> {
        self.group
            .representative(&self.coordinates)
            .expect("coordinates sized at construction")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let coords = self
            .coordinates
            .iter()
            .zip(&other.coordinates)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.group.clone(), coords)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coords = self.coordinates.iter().map(|a| a * k).collect();
        Self::new(self.group.clone(), coords).expect("same shape")
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        let same = Arc::ptr_eq(&self.group, &other.group)
            || (self.group.degree == other.group.degree
                && self.group.modulus == other.group.modulus
                && self.group.generators == other.group.generators);
        if same {
            Ok(())
        } else {
            Err(Error::InvalidParameter("classes live in different groups".into()))
        }
    }
}

impl PartialEq for HomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other).is_ok() && self.coordinates == other.coordinates
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coordinates.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `H_n(C; Z/modulus)` for `0 <= n <= top_dim(C)`.
pub fn homology(c: &ChainComplex, n: i64, modulus: u64) -> Result<HomologyGroup> {
    if n < 0 || n > c.top_dim() as i64 {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            top: c.top_dim() as i64,
        });
    }
    Ok(HomologyGroup::compute(c, n, modulus))
}

/// Like [`homology`] but total in `n`: degrees without cells give the trivial group.
pub fn homology_at(c: &ChainComplex, n: i64, modulus: u64) -> HomologyGroup {
    HomologyGroup::compute(c, n, modulus)
}

/// Class of the cycle `z` in `H_n(C; Z/modulus)`.
pub fn classify_cycle(c: &ChainComplex, n: i64, modulus: u64, z: &[BigInt]) -> Result<HomologyClass> {
    let g = Arc::new(homology(c, n, modulus)?);
    HomologyClass::from_cycle(g, z)
}

/// Matrix of `f_*` from the generators of `source` to those of `target`.
pub fn induced_map_between(f: &ChainMap<'_>, source: &HomologyGroup, target: &HomologyGroup) -> Result<IntegerMatrix> {
    let fn_ = f.component(source.degree);
    let images = source
        .generators
        .iter()
        .map(|g| fn_.mul_vec(g))
        .collect::<Result<Vec<_>>>()?;
    target.coordinate_matrix(&images)
}

/// Matrix of `f_* : H_n(source) -> H_n(target)` in the generator bases.
pub fn induced_map(f: &ChainMap<'_>, n: i64, modulus: u64) -> Result<IntegerMatrix> {
    let hs = homology_at(f.source(), n, modulus);
    let ht = homology_at(f.target(), n, modulus);
    induced_map_between(f, &hs, &ht)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::to_big;
    use crate::spaces;

    fn pres(c: &ChainComplex, n: i64, k: u64) -> String {
        homology(c, n, k).unwrap().to_string()
    }

    #[test]
    fn klein_bottle_groups() {
        let k = spaces::klein_bottle();
        assert_eq!(pres(&k, 2, 0), "0");
        assert_eq!(pres(&k, 2, 2), "Z/2");
        assert_eq!(pres(&k, 1, 0), "Z ⊕ Z/2");
        assert_eq!(pres(&k, 0, 0), "Z");
        assert_eq!(pres(&k, 1, 2), "Z/2 ⊕ Z/2");
    }

    #[test]
    fn bz3_degree_five() {
        let b = spaces::bzp_skeleton(3, 8).unwrap();
        assert_eq!(pres(&b, 5, 0), "Z/3");
        assert_eq!(pres(&b, 6, 0), "0");
    }

    #[test]
    fn degree_out_of_range() {
        let k = spaces::klein_bottle();
        assert!(matches!(homology(&k, 3, 0), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(homology(&k, -1, 0), Err(Error::DegreeOutOfRange { .. })));
        assert!(homology_at(&k, 3, 0).is_trivial());
    }

    #[test]
    fn modulus_one_is_trivial() {
        let k = spaces::klein_bottle();
        for n in 0..=2 {
            assert!(homology(&k, n, 1).unwrap().is_trivial());
        }
    }

    #[test]
    fn klein_face_mod_two_is_fundamental() {
        let k = spaces::klein_bottle();
        let cls = classify_cycle(&k, 2, 2, &to_big(&[1])).unwrap();
        assert_eq!(cls.coordinates, to_big(&[1]));
        assert!(matches!(
            classify_cycle(&k, 2, 0, &to_big(&[1])),
            Err(Error::NotACycle { .. })
        ));
    }

    #[test]
    fn boundaries_classify_to_zero() {
        let k = spaces::klein_bottle();
        let b = k.apply_boundary(2, &to_big(&[5])).unwrap();
        assert!(classify_cycle(&k, 1, 0, &b).unwrap().is_zero());
        assert!(classify_cycle(&k, 1, 4, &b).unwrap().is_zero());
        assert!(classify_cycle(&k, 1, 5, &b).unwrap().is_zero());
    }

    #[test]
    fn bz3_top_mod_three_cell_is_generator() {
        let b = spaces::bzp_skeleton(3, 8).unwrap();
        let cls = classify_cycle(&b, 3, 3, &to_big(&[1])).unwrap();
        assert_eq!(cls.coordinates, to_big(&[1]));
    }

    #[test]
    fn generators_reclassify_to_basis_vectors() {
        for c in spaces::library() {
            for n in 0..=c.top_dim() as i64 {
                for k in [0, 2, 3, 4, 9] {
                    let g = homology(&c, n, k).unwrap();
                    for (i, z) in g.generators.iter().enumerate() {
                        let coords = g.coordinates(z).unwrap();
                        let mut e = vec![BigInt::zero(); g.rank()];
                        e[i] = BigInt::one();
                        assert_eq!(coords, e, "{} n={n} k={k}", c.name());
                        let is_boundary = crate::exactalg::solve_linear(&c.boundary(n + 1), z, k)
                            .unwrap()
                            .is_some();
                        assert!(!is_boundary);
                    }
                }
            }
        }
    }

    #[test]
    fn induced_maps() {
        let k = spaces::klein_bottle();
        let id = ChainMap::identity(&k);
        assert_eq!(induced_map(&id, 1, 0).unwrap(), IntegerMatrix::identity(2));

        let sk = k.skeleton(0);
        let sub = sk.complex(&k).unwrap();
        let incl = ChainMap::new(&sub, &k, sk.inclusion_components(&k)).unwrap();
        assert_eq!(induced_map(&incl, 0, 0).unwrap(), IntegerMatrix::from_i64(&[&[1]]));

        let s1 = spaces::circle();
        let deg3 = ChainMap::new(
            &s1,
            &s1,
            vec![IntegerMatrix::identity(1), IntegerMatrix::from_i64(&[&[3]])],
        )
        .unwrap();
        let m = induced_map(&deg3, 1, 0).unwrap();
        assert_eq!(num_traits::Signed::abs(m.get(0, 0)), BigInt::from(3));
    }
}
