//! Cross products, Künneth bookkeeping and the Bockstein derivation identity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::bockstein::Groups;
use crate::complex::{tensor_complex, tensor_index, ChainComplex};
use crate::error::{Error, Result};
use crate::exactalg::{rank_mod_prime, GroupPresentation, IntegerMatrix};
use crate::homology::{homology_at, HomologyClass, HomologyGroup};
use crate::report::Report;
use crate::spaces::bzp_skeleton;

/// Coefficients of a cross product: `(k, k) -> k`, `(0, k) -> k`, `(0, 0) -> 0`.
pub fn product_modulus(a: u64, b: u64) -> Result<u64> {
    match (a, b) {
        (0, m) | (m, 0) => Ok(m),
        (x, y) if x == y => Ok(x),
        (x, y) => Err(Error::IncompatibleModuli(x, y)),
    }
}

/// Chain `x ⊗ y` in `tensor_complex(c, d)`, for `x ∈ C_p`, `y ∈ D_q`.
pub fn cross_chain(c: &ChainComplex, d: &ChainComplex, p: usize, x: &[BigInt], q: usize, y: &[BigInt]) -> Vec<BigInt> {
    let n = p + q;
    let len = (0..=n).map(|s| c.rank(s as i64) * d.rank((n - s) as i64)).sum();
    let mut out = vec![BigInt::zero(); len];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out[tensor_index(c, d, n, p, i, j)] = a * b;
            }
        }
    }
    out
}

/// A product complex together with its factors and a cache of its homology.
pub struct Product<'a> {
    pub left: &'a ChainComplex,
    pub right: &'a ChainComplex,
    pub complex: ChainComplex,
}

impl<'a> Product<'a> {
    pub fn new(left: &'a ChainComplex, right: &'a ChainComplex) -> Self {
        Self {
            left,
            right,
            complex: tensor_complex(left, right),
        }
    }

    fn check_factor(&self, x: &HomologyClass, left: bool) -> Result<()> {
        let c = if left { self.left } else { self.right };
        if x.group.chain_len() != c.rank(x.degree()) {
            return Err(Error::DimensionMismatch(format!(
                "class of degree {} does not live on {}",
                x.degree(),
                c.name()
            )));
        }
        Ok(())
    }

    /// `a × b`, classified in the product's homology through `groups`.
    pub fn cross(&self, groups: &mut Groups<'_>, a: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass> {
        self.check_factor(a, true)?;
        self.check_factor(b, false)?;
        let m = product_modulus(a.modulus(), b.modulus())?;
        if a.degree() < 0 || b.degree() < 0 {
            return Ok(HomologyClass::zero(groups.get(a.degree() + b.degree(), m)));
        }
        let (p, q) = (a.degree() as usize, b.degree() as usize);
        let z = cross_chain(self.left, self.right, p, &a.representative(), q, &b.representative());
        groups.classify((p + q) as i64, m, &z)
    }
}

/// `a × b` in the homology of `tensor_complex(c, d)`.
pub fn cross_class(c: &ChainComplex, d: &ChainComplex, a: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass> {
    let prod = Product::new(c, d);
    let mut g = Groups::new(&prod.complex);
    prod.cross(&mut g, a, b)
}

/// `G ⊗ H` from invariant factors.
pub fn tensor_pair(g: &GroupPresentation, h: &GroupPresentation) -> GroupPresentation {
    let mut orders = vec![BigInt::zero(); g.free_rank * h.free_rank];
    for s in &g.torsion {
        orders.extend(std::iter::repeat_n(s.clone(), h.free_rank));
    }
    for t in &h.torsion {
        orders.extend(std::iter::repeat_n(t.clone(), g.free_rank));
    }
    for s in &g.torsion {
        for t in &h.torsion {
            orders.push(s.gcd(t));
        }
    }
    GroupPresentation::from_orders(&orders)
}

/// `Tor(G, H)`: `Tor(Z/a, Z/b) = Z/gcd(a, b)`; free summands contribute nothing.
pub fn tor_pair(g: &GroupPresentation, h: &GroupPresentation) -> GroupPresentation {
    let orders: Vec<BigInt> = g
        .torsion
        .iter()
        .flat_map(|s| h.torsion.iter().map(move |t| s.gcd(t)))
        .collect();
    GroupPresentation::from_orders(&orders)
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethTerm {
    pub i: usize,
    pub j: usize,
    pub group: GroupPresentation,
}

/// Degree-`n` homology of a product split into tensor and Tor contributions.
///
/// With `modulus = k > 0` the contributions are `H_i(C; Z) ⊗ H_j(D; Z/k)`
/// (`i + j = n`) and `Tor(H_i(C; Z), H_j(D; Z/k))` (`i + j = n - 1`).
#[derive(Clone, Debug)]
pub struct KunnethDecomposition {
    pub degree: usize,
    pub modulus: u64,
    pub tensor_summands: Vec<KunnethTerm>,
    pub tor_summands: Vec<KunnethTerm>,
    pub total: HomologyGroup,
}

impl KunnethDecomposition {
    /// Direct sum of all listed contributions.
    pub fn bookkeeping(&self) -> GroupPresentation {
        self.tensor_summands
            .iter()
            .chain(&self.tor_summands)
            .fold(GroupPresentation::trivial(), |acc, t| acc.direct_sum(&t.group))
    }
}

/// Künneth decomposition of `H_n(C ⊗ D; Z/modulus)`, checked against a direct computation.
pub fn kunneth(c: &ChainComplex, d: &ChainComplex, n: usize, modulus: u64) -> Result<KunnethDecomposition> {
    let top = c.top_dim() + d.top_dim();
    if n > top {
        return Err(Error::DegreeOutOfRange {
            degree: n as i64,
            top: top as i64,
        });
    }
    let left: Vec<GroupPresentation> = (0..=c.top_dim())
        .map(|i| homology_at(c, i as i64, 0).presentation())
        .collect();
    let right: Vec<GroupPresentation> = (0..=d.top_dim())
        .map(|j| homology_at(d, j as i64, modulus).presentation())
        .collect();
    let mut tensor_summands = Vec::new();
    let mut tor_summands = Vec::new();
    for (i, gi) in left.iter().enumerate() {
        if let Some(hj) = n.checked_sub(i).and_then(|j| right.get(j)) {
            let group = tensor_pair(gi, hj);
            if !group.is_trivial() {
                tensor_summands.push(KunnethTerm { i, j: n - i, group });
            }
        }
        if let Some(hj) = (n + 1).checked_sub(i + 2).and_then(|j| right.get(j)) {
            let group = tor_pair(gi, hj);
            if !group.is_trivial() {
                tor_summands.push(KunnethTerm { i, j: n - 1 - i, group });
            }
        }
    }
    let total = homology_at(&tensor_complex(c, d), n as i64, modulus);
    let out = KunnethDecomposition {
        degree: n,
        modulus,
        tensor_summands,
        tor_summands,
        total,
    };
    let book = out.bookkeeping();
    if book != out.total.presentation() {
        return Err(Error::Internal(format!(
            "Künneth bookkeeping {book} disagrees with direct homology {}",
            out.total
        )));
    }
    Ok(out)
}

/// Checks `β̃(a × b) = β̃(a) × b + (-1)^{deg a} a × β̃(b)` in `H(C ⊗ D; Z/k)`.
pub fn verify_derivation(
    c: &ChainComplex,
    d: &ChainComplex,
    a: &HomologyClass,
    b: &HomologyClass,
    k: u64,
) -> Result<Report> {
    let prod = Product::new(c, d);
    let mut report = Report::new(format!("Bockstein derivation on {}", prod.complex.name()));
    let mut groups = DerivationGroups {
        left: Groups::new(c),
        right: Groups::new(d),
        product: Groups::new(&prod.complex),
    };
    derivation_rows(&prod, &mut groups, &mut report, a, b, k)?;
    Ok(report)
}

struct DerivationGroups<'a, 'b> {
    left: Groups<'a>,
    right: Groups<'a>,
    product: Groups<'b>,
}

fn derivation_rows(
    prod: &Product<'_>,
    groups: &mut DerivationGroups<'_, '_>,
    report: &mut Report,
    a: &HomologyClass,
    b: &HomologyClass,
    k: u64,
) -> Result<bool> {
    if a.modulus() != k || b.modulus() != k {
        return Err(Error::IncompatibleModuli(a.modulus(), b.modulus()));
    }
    let DerivationGroups {
        left: gc,
        right: gd,
        product: gp,
    } = groups;

    let ab = prod.cross(gp, a, b)?;
    let lhs = gp.bockstein(&ab)?.modk_image;
    let ba = gc.bockstein(a)?.modk_image;
    let bb = gd.bockstein(b)?.modk_image;
    let first = prod.cross(gp, &ba, b)?;
    let mut second = prod.cross(gp, a, &bb)?;
    if a.degree() % 2 == 1 {
        second = second.scale(&BigInt::from(-1));
    }
    let rhs = first.add(&second)?;
    let ok = lhs == rhs;
    report.check(
        format!("deg {} x deg {}: a={} b={}", a.degree(), b.degree(), a, b),
        ok,
        format!("lhs = {lhs}, rhs = {rhs}"),
    );
    Ok(ok)
}

/// Runs the derivation identity on every pair of generators of degrees summing to at most `max_total`.
pub fn derivation_suite(c: &ChainComplex, d: &ChainComplex, k: u64, max_total: usize) -> Result<Report> {
    let prod = Product::new(c, d);
    let mut report = Report::new(format!("Bockstein derivation on {} mod {k}", prod.complex.name()));
    let mut groups = DerivationGroups {
        left: Groups::new(c),
        right: Groups::new(d),
        product: Groups::new(&prod.complex),
    };
    for i in 0..=c.top_dim().min(max_total) {
        let hi = groups.left.get(i as i64, k);
        for j in 0..=d.top_dim().min(max_total - i) {
            let hj = groups.right.get(j as i64, k);
            for s in 0..hi.rank() {
                for t in 0..hj.rank() {
                    let a = HomologyClass::basis(hi.clone(), s);
                    let b = HomologyClass::basis(hj.clone(), t);
                    derivation_rows(&prod, &mut groups, &mut report, &a, &b, k)?;
                }
            }
        }
    }
    Ok(report)
}

/// Default truncation of the `BZ_p` factors for degree-`n` product computations.
pub fn default_truncation(n: usize) -> usize {
    2 * n + 2
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// One element of the odd-degree kernel basis: a sum of `α_i × α_j` cells.
#[derive(Clone, Debug)]
pub struct KernelElement {
    /// `(i, j)` index pairs with coefficient `1`.
    pub terms: Vec<(usize, usize)>,
    pub chain: Vec<BigInt>,
    pub class: HomologyClass,
    /// Nonzero and in the kernels of both Bocksteins.
    pub verified: bool,
}

impl KernelElement {
    pub fn label(&self) -> String {
        let name = |i: usize| if i == 0 { "1".to_string() } else { format!("a{i}") };
        self.terms
            .iter()
            .map(|&(i, j)| format!("{}x{}", name(i), name(j)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The kernel basis of `β̃` in `H_n(BZ_p × BZ_p; Z/p)` for odd `n`, with its checks.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub p: u64,
    pub degree: usize,
    pub truncation: usize,
    pub elements: Vec<KernelElement>,
    /// `Z/p`-dimension of the image of `H_n(Z) -> H_n(Z/p)`.
    pub reduction_rank: usize,
    pub report: Report,
}

impl KernelBasis {
    pub fn classes(&self) -> Vec<HomologyClass> {
        self.elements.iter().map(|e| e.class.clone()).collect()
    }
}

/// Index pairs of the kernel basis in odd degree `n`:
/// `(0, n)`, then `(2i, n-2i) + (2i-1, n-2i+1)` for `1 <= i <= (n-1)/2`, then `(n, 0)`.
pub fn kernel_basis_terms(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![vec![(0, n)]];
    for i in 1..=(n - 1) / 2 {
        out.push(vec![(2 * i, n - 2 * i), (2 * i - 1, n - 2 * i + 1)]);
    }
    out.push(vec![(n, 0)]);
    out
}

pub fn kernel_basis_classes(p: u64, n: usize) -> Result<KernelBasis> {
    kernel_basis_with(p, n, default_truncation(n))
}

/// As [`kernel_basis_classes`] with an explicit truncation dimension (at least `n + 1`).
pub fn kernel_basis_with(p: u64, n: usize, truncation: usize) -> Result<KernelBasis> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "degree {n} is even; even degrees are spanned by pure products of odd classes"
        )));
    }
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not an odd prime")));
    }
    if truncation < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "truncation {truncation} below degree {n} + 1"
        )));
    }
    let b = bzp_skeleton(p, truncation)?;
    let prod = Product::new(&b, &b);
    let mut g = Groups::new(&prod.complex);
    let unit = |i: usize| {
        let mut v = vec![BigInt::zero(); b.rank(i as i64)];
        v[0] = BigInt::from(1);
        v
    };

    let mut report = Report::new(format!("kernel basis of H{n}(BZ{p} x BZ{p}; Z/{p})"));
    let mut elements = Vec::new();
    for terms in kernel_basis_terms(n) {
        let mut chain = vec![BigInt::zero(); prod.complex.rank(n as i64)];
        for &(i, j) in &terms {
            for (x, y) in chain.iter_mut().zip(cross_chain(&b, &b, i, &unit(i), j, &unit(j))) {
                *x += y;
            }
        }
        let bock = g.bockstein_of_chain(n as i64, p, &chain)?;
        let mut element = KernelElement {
            terms,
            chain,
            class: bock.input.clone(),
            verified: false,
        };
        let label = element.label();
        let a = report.check(
            format!("{label} is nonzero"),
            !bock.input.is_zero(),
            format!("class {}", bock.input),
        );
        let b = report.check(
            format!("{label} in ker beta~"),
            bock.modk_image.is_zero(),
            format!("beta~ = {}", bock.modk_image),
        );
        let c = report.check(
            format!("{label} in ker beta"),
            bock.integral_image.is_zero(),
            format!("beta = {}", bock.integral_image),
        );
        element.verified = a && b && c;
        elements.push(element);
    }

    let h = g.get(n as i64, p);
    let coords: Vec<Vec<BigInt>> = elements.iter().map(|e| e.class.coordinates.clone()).collect();
    let rank = rank_mod_prime(&IntegerMatrix::from_columns(h.rank(), &coords), p);
    report.check(
        "linearly independent over Z/p",
        rank == elements.len(),
        format!("rank {rank} of {} elements", elements.len()),
    );
    let reduction = g.reduction_matrix(n as i64, 0, p)?;
    let reduction_rank = rank_mod_prime(&reduction, p);
    report.check(
        "count equals dimension of the reduction image",
        reduction_rank == elements.len(),
        format!("image of H{n}(Z) in H{n}(Z/{p}) has dimension {reduction_rank}"),
    );
    Ok(KernelBasis {
        p,
        degree: n,
        truncation,
        elements,
        reduction_rank,
        report,
    })
}
