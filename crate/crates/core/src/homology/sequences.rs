//! Long exact sequences of a pair and Mayer–Vietoris, built on generators.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::{check_exactness, record_checks, ExactSequence, GroupMap};
use super::{homology_at, HomologyGroup};
use crate::complex::{relative_complex, ChainComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::exactalg::IntegerMatrix;
use crate::report::Report;

/// Matrix of a chain-level map between homology groups, in generator bases.
pub(crate) fn class_map(
    source: &HomologyGroup,
    target: &HomologyGroup,
    mut f: impl FnMut(&[BigInt]) -> Result<Vec<BigInt>>,
) -> Result<IntegerMatrix> {
    let images = source.generators.iter().map(|g| f(g)).collect::<Result<Vec<_>>>()?;
    target.coordinate_matrix(&images)
}

fn group_map(label: impl Into<String>, matrix: IntegerMatrix) -> Option<GroupMap> {
    Some(GroupMap {
        label: label.into(),
        matrix,
    })
}

fn top_degree(c: &ChainComplex, max_degree: usize) -> i64 {
    max_degree.min(c.top_dim()) as i64
}

/// Chain on `from` (a subcomplex of the same parent) carried into `to`.
fn transfer(from: &Subcomplex, to: &Subcomplex, n: i64, chain: &[BigInt]) -> Vec<BigInt> {
    to.restrict(n, &from.embed(n, chain))
}

struct PairData {
    sub: ChainComplex,
    quotient: ChainComplex,
}

impl PairData {
    fn new(c: &ChainComplex, a: &Subcomplex) -> Result<Self> {
        Ok(Self {
            sub: a.complex(c)?,
            quotient: relative_complex(c, a)?,
        })
    }
}

fn pair_connecting(c: &ChainComplex, a: &Subcomplex, hq: &HomologyGroup, ha: &HomologyGroup) -> Result<IntegerMatrix> {
    let n = hq.degree;
    class_map(hq, ha, |g| {
        let lift = a.embed_complement(n, g);
        let b = c.apply_boundary(n, &lift)?;
        Ok(a.restrict(n - 1, &b))
    })
}

/// `∂ : H_n(C, A) -> H_{n-1}(A)`: lift a relative cycle to `C`, take its
/// boundary, and keep the part supported on `A`.
pub fn connecting_pair(c: &ChainComplex, a: &Subcomplex, n: i64, modulus: u64) -> Result<IntegerMatrix> {
    let data = PairData::new(c, a)?;
    let hq = homology_at(&data.quotient, n, modulus);
    let ha = homology_at(&data.sub, n - 1, modulus);
    pair_connecting(c, a, &hq, &ha)
}

/// Exactness of `H_n(A) -> H_n(C) -> H_n(C,A) -> H_{n-1}(A)` for `n <= max_degree`.
pub fn les_pair_report(c: &ChainComplex, a: &Subcomplex, modulus: u64, max_degree: usize) -> Result<Report> {
    let data = PairData::new(c, a)?;
    let top = top_degree(c, max_degree);
    let mut seq = ExactSequence::new();

    let hq_top = homology_at(&data.quotient, top + 1, modulus);
    seq.push(format!("H{}(C,A)", top + 1), hq_top.orders().to_vec(), None)?;
    let mut prev_q = hq_top;
    for n in (0..=top).rev() {
        let ha = homology_at(&data.sub, n, modulus);
        let hc = homology_at(c, n, modulus);
        let hq = homology_at(&data.quotient, n, modulus);

        let delta = pair_connecting(c, a, &prev_q, &ha)?;
        seq.push(format!("H{n}(A)"), ha.orders().to_vec(), group_map("boundary", delta))?;
        let incl = class_map(&ha, &hc, |z| Ok(a.embed(n, z)))?;
        seq.push(format!("H{n}(C)"), hc.orders().to_vec(), group_map("inclusion", incl))?;
        let proj = class_map(&hc, &hq, |z| Ok(a.restrict_complement(n, z)))?;
        seq.push(
            format!("H{n}(C,A)"),
            hq.orders().to_vec(),
            group_map("projection", proj),
        )?;
        prev_q = hq;
    }
    seq.push(
        "0",
        Vec::new(),
        group_map("zero", IntegerMatrix::zeros(0, prev_q.rank())),
    )?;

    let mut report = Report::new(format!("pair sequence of {} mod {modulus}", c.name()));
    record_checks(&mut report, "exact", &check_exactness(&seq));
    Ok(report)
}

/// How a cycle of `A ∪ B` is split into an `A`-part and a `B`-part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// Cells of `A` go to the `A`-part.
    AFirst,
    /// Cells of `B` go to the `B`-part.
    BFirst,
    /// Coefficients on `A ∩ B` are split at random.
    Random(u64),
}

struct Cover {
    a: Subcomplex,
    b: Subcomplex,
    i: Subcomplex,
    ca: ChainComplex,
    cb: ChainComplex,
    ci: ChainComplex,
}

impl Cover {
    fn new(c: &ChainComplex, a: &Subcomplex, b: &Subcomplex) -> Result<Self> {
        a.check_parent(c)?;
        b.check_parent(c)?;
        if a.union(b).cell_count() != c.cell_count() {
            return Err(Error::Cover("the two subcomplexes do not cover every cell".into()));
        }
        let i = a.intersection(b);
        let ci = i.complex(c)?;
        ci.validate().map_err(Error::Validation)?;
        Ok(Self {
            ca: a.complex(c)?,
            cb: b.complex(c)?,
            ci,
            a: a.clone(),
            b: b.clone(),
            i,
        })
    }

    fn split(&self, n: i64, z: &[BigInt], how: Splitting, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
        let mut za = vec![BigInt::zero(); z.len()];
        for (idx, x) in z.iter().enumerate() {
            let (in_a, in_b) = (self.a.contains(n as usize, idx), self.b.contains(n as usize, idx));
            za[idx] = match (in_a, in_b, how) {
                (true, false, _) => x.clone(),
                (false, _, _) => BigInt::zero(),
                (true, true, Splitting::AFirst) => x.clone(),
                (true, true, Splitting::BFirst) => BigInt::zero(),
                (true, true, Splitting::Random(_)) => BigInt::from(rng.gen_range(-5i64..=5)),
            };
        }
        za
    }

    fn connecting(
        &self,
        c: &ChainComplex,
        hc: &HomologyGroup,
        hi: &HomologyGroup,
        how: Splitting,
    ) -> Result<IntegerMatrix> {
        let n = hc.degree;
        let seed = if let Splitting::Random(s) = how { s } else { 0 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        class_map(hc, hi, |z| {
            let za = self.split(n, z, how, &mut rng);
            let b = c.apply_boundary(n, &za)?;
            Ok(self.i.restrict(n - 1, &b))
        })
    }

    /// Generators of `H_n(A) ⊕ H_n(B)` as `(chain on A, chain on B)`, A-summands first.
    fn sum_generators(ha: &HomologyGroup, hb: &HomologyGroup) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
        let za = vec![BigInt::zero(); hb.chain_len()];
        let zb = vec![BigInt::zero(); ha.chain_len()];
        ha.generators
            .iter()
            .map(|g| (g.clone(), za.clone()))
            .chain(hb.generators.iter().map(|g| (zb.clone(), g.clone())))
            .collect()
    }
}

/// Matrix of the Mayer–Vietoris connecting map `H_n(C) -> H_{n-1}(A ∩ B)`.
pub fn mayer_vietoris_connecting(
    c: &ChainComplex,
    a: &Subcomplex,
    b: &Subcomplex,
    n: i64,
    modulus: u64,
    how: Splitting,
) -> Result<IntegerMatrix> {
    let cover = Cover::new(c, a, b)?;
    let hc = homology_at(c, n, modulus);
    let hi = homology_at(&cover.ci, n - 1, modulus);
    cover.connecting(c, &hc, &hi, how)
}

/// Exactness of `H_n(A∩B) -> H_n(A) ⊕ H_n(B) -> H_n(C) -> H_{n-1}(A∩B)`
/// with maps `x ↦ (x, x)` and `(a, b) ↦ a - b`.
pub fn mayer_vietoris_report(
    c: &ChainComplex,
    a: &Subcomplex,
    b: &Subcomplex,
    modulus: u64,
    max_degree: usize,
) -> Result<Report> {
    let cover = Cover::new(c, a, b)?;
    let top = top_degree(c, max_degree);
    let mut seq = ExactSequence::new();

    let hc_top = homology_at(c, top + 1, modulus);
    seq.push(format!("H{}(C)", top + 1), hc_top.orders().to_vec(), None)?;
    let mut prev_c = hc_top;
    for n in (0..=top).rev() {
        let hi = homology_at(&cover.ci, n, modulus);
        let ha = homology_at(&cover.ca, n, modulus);
        let hb = homology_at(&cover.cb, n, modulus);
        let hc = homology_at(c, n, modulus);

        let delta = cover.connecting(c, &prev_c, &hi, Splitting::AFirst)?;
        seq.push(format!("H{n}(A∩B)"), hi.orders().to_vec(), group_map("boundary", delta))?;

        let mut sum_orders = ha.orders().to_vec();
        sum_orders.extend_from_slice(hb.orders());
        let phi_cols = hi
            .generators
            .iter()
            .map(|z| {
                let mut col = ha.coordinates(&transfer(&cover.i, &cover.a, n, z))?;
                col.extend(hb.coordinates(&transfer(&cover.i, &cover.b, n, z))?);
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        let phi = IntegerMatrix::from_columns(sum_orders.len(), &phi_cols);
        seq.push(format!("H{n}(A)+H{n}(B)"), sum_orders, group_map("restriction", phi))?;

        let psi_chains = Cover::sum_generators(&ha, &hb)
            .into_iter()
            .map(|(za, zb)| {
                let ea = cover.a.embed(n, &za);
                let eb = cover.b.embed(n, &zb);
                ea.iter().zip(&eb).map(|(x, y)| x - y).collect()
            })
            .collect::<Vec<Vec<BigInt>>>();
        let psi = hc.coordinate_matrix(&psi_chains)?;
        seq.push(format!("H{n}(C)"), hc.orders().to_vec(), group_map("difference", psi))?;
        prev_c = hc;
    }
    seq.push(
        "0",
        Vec::new(),
        group_map("zero", IntegerMatrix::zeros(0, prev_c.rank())),
    )?;

    let mut report = Report::new(format!("Mayer-Vietoris sequence of {} mod {modulus}", c.name()));
    record_checks(&mut report, "exact", &check_exactness(&seq));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::to_big;
    use crate::spaces;

    #[test]
    fn cylinder_fundamental_class_maps_to_difference_of_circles() {
        let m = spaces::cylinder_pair();
        let d = connecting_pair(&m.complex, &m.sub, 2, 0).unwrap();
        // H_2(cyl, ∂cyl) = Z, H_1(∂cyl) = Z^2; the image is ±(1, -1).
        assert_eq!(d.shape(), (2, 1));
        assert_eq!(d.get(0, 0), &-d.get(1, 0));
        assert_eq!(num_traits::Signed::abs(d.get(0, 0)), BigInt::from(1));
    }

    #[test]
    fn lens_skeleton_pair_mod_three() {
        let l = spaces::lens_space(3, 4).unwrap();
        let x2 = l.skeleton(2);
        let x2c = x2.complex(&l).unwrap();
        let x0 = x2c.skeleton(0);
        let d = connecting_pair(&x2c, &x0, 2, 3).unwrap();
        // The relative 2-cell bounds 3e1, which misses the 0-skeleton.
        assert!(d.is_zero());
        let d1 = connecting_pair(&x2c, &x0, 1, 3).unwrap();
        assert!(d1.is_zero_mod(&BigInt::from(3)));
    }

    #[test]
    fn pair_reports_pass() {
        let k = spaces::klein_bottle();
        assert!(les_pair_report(&k, &k.skeleton(1), 0, 8).unwrap().passed());
        assert!(les_pair_report(&k, &Subcomplex::empty(&k), 2, 8).unwrap().passed());
        let l = spaces::lens_space(3, 4).unwrap();
        assert!(les_pair_report(&l, &l.skeleton(5), 3, 8).unwrap().passed());
        let m = spaces::cylinder_pair();
        for k in [0, 2, 3] {
            assert!(les_pair_report(&m.complex, &m.sub, k, 8).unwrap().passed());
        }
    }

    #[test]
    fn mayer_vietoris_reports_pass() {
        for m in [spaces::torus_cylinders(), spaces::klein_cylinders()] {
            for k in [0, 2, 3, 4, 9] {
                let r = mayer_vietoris_report(&m.complex, &m.a, &m.b, k, 8).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
        let k = spaces::klein_bottle();
        let full = Subcomplex::full(&k);
        assert!(mayer_vietoris_report(&k, &full, &full, 0, 8).unwrap().passed());
    }

    #[test]
    fn torus_connecting_map_in_degree_one() {
        let m = spaces::torus_cylinders();
        let d = mayer_vietoris_connecting(&m.complex, &m.a, &m.b, 1, 0, Splitting::AFirst).unwrap();
        assert_eq!(crate::exactalg::smith_normal_form(&d).rank, 1);
        let d2 = mayer_vietoris_connecting(&m.complex, &m.a, &m.b, 2, 0, Splitting::AFirst).unwrap();
        assert_eq!(crate::exactalg::smith_normal_form(&d2).rank, 1);
    }

    #[test]
    fn connecting_map_ignores_splitting() {
        for m in [spaces::torus_cylinders(), spaces::klein_cylinders()] {
            for k in [0, 2, 3] {
                for n in 0..=2 {
                    let base = mayer_vietoris_connecting(&m.complex, &m.a, &m.b, n, k, Splitting::AFirst).unwrap();
                    for how in [Splitting::BFirst, Splitting::Random(1), Splitting::Random(99)] {
                        let other = mayer_vietoris_connecting(&m.complex, &m.a, &m.b, n, k, how).unwrap();
                        let hi = homology_at(&m.a.intersection(&m.b).complex(&m.complex).unwrap(), n - 1, k);
                        let diff: Vec<Vec<BigInt>> = (0..base.cols())
                            .map(|j| {
                                let col: Vec<BigInt> =
                                    base.column(j).iter().zip(other.column(j)).map(|(x, y)| x - y).collect();
                                hi.normalize(&col)
                            })
                            .collect();
                        assert!(
                            diff.iter().flatten().all(Zero::is_zero),
                            "{} n={n} k={k} {how:?}",
                            m.complex.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cover_must_cover() {
        let k = spaces::klein_bottle();
        let s = k.skeleton(1);
        assert!(matches!(mayer_vietoris_report(&k, &s, &s, 0, 2), Err(Error::Cover(_))));
        let _ = to_big(&[0]);
    }
}
