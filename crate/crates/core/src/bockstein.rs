//! Bockstein homomorphisms and the long exact sequences of coefficient
//! extensions, computed by lifting a cycle and dividing its boundary.
//!
//! `β : H_n(C; Z/k) -> H_{n-1}(C; Z)` sends `[z]` to `[∂z / k]`, and
//! `β̃ : H_n(C; Z/k) -> H_{n-1}(C; Z/k)` is its reduction mod `k`. Both are
//! computed from the same integer lift `z`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::exactalg::IntegerMatrix;
use crate::homology::{check_exactness, homology_at, ExactSequence, GroupMap, HomologyClass, HomologyGroup};
use crate::report::Report;

/// Default number of randomized re-lifts per class in the well-definedness check.
pub const DEFAULT_TRIALS: usize = 12;

/// The lifted chain and its boundary divided by `k`; `k * divided = ∂ lift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BocksteinWitness {
    pub lift: Vec<BigInt>,
    pub divided: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct BocksteinResult {
    pub input: HomologyClass,
    pub integral_image: HomologyClass,
    pub modk_image: HomologyClass,
    pub witness: BocksteinWitness,
}

/// Homology groups of one complex, computed on demand.
pub struct Groups<'a> {
    complex: &'a ChainComplex,
    cache: HashMap<(i64, u64), Arc<HomologyGroup>>,
}

impl<'a> Groups<'a> {
    pub fn new(complex: &'a ChainComplex) -> Self {
        Self {
            complex,
            cache: HashMap::new(),
        }
    }

    pub fn complex(&self) -> &'a ChainComplex {
        self.complex
    }

    pub fn get(&mut self, n: i64, modulus: u64) -> Arc<HomologyGroup> {
        let c = self.complex;
        self.cache
            .entry((n, modulus))
            .or_insert_with(|| Arc::new(homology_at(c, n, modulus)))
            .clone()
    }

    /// Class of a chain known to be a cycle at `modulus`.
    pub fn classify(&mut self, n: i64, modulus: u64, z: &[BigInt]) -> Result<HomologyClass> {
        HomologyClass::from_cycle(self.get(n, modulus), z)
    }

    /// `[∂z / divisor]` at `modulus`, with the witness. `z` must be a mod-`divisor` cycle.
    fn divide_boundary(
        &mut self,
        n: i64,
        divisor: u64,
        modulus: u64,
        z: &[BigInt],
    ) -> Result<(HomologyClass, Vec<BigInt>)> {
        let b = self.complex.apply_boundary(n, z)?;
        let k = BigInt::from(divisor);
        let mut d = Vec::with_capacity(b.len());
        for x in &b {
            let (q, r) = x.div_rem(&k);
            if !r.is_zero() {
                return Err(Error::Internal(format!(
                    "boundary entry {x} of a mod-{divisor} cycle is not divisible"
                )));
            }
            d.push(q);
        }
        let cls = self.classify(n - 1, modulus, &d)?;
        Ok((cls, d))
    }

    /// Both Bocksteins of the mod-`k` cycle `z` in degree `n`.
    pub fn bockstein_of_chain(&mut self, n: i64, k: u64, z: &[BigInt]) -> Result<BocksteinResult> {
        check_k(k)?;
        let input = self.classify(n, k, z)?;
        let (integral_image, divided) = self.divide_boundary(n, k, 0, z)?;
        let modk_image = self.classify(n - 1, k, &divided)?;
        Ok(BocksteinResult {
            input,
            integral_image,
            modk_image,
            witness: BocksteinWitness {
                lift: z.to_vec(),
                divided,
            },
        })
    }

    pub fn bockstein(&mut self, x: &HomologyClass) -> Result<BocksteinResult> {
        let k = x.modulus();
        check_k(k)?;
        if x.group.chain_len() != self.complex.rank(x.degree()) {
            return Err(Error::DimensionMismatch("class does not belong to this complex".into()));
        }
        self.bockstein_of_chain(x.degree(), k, &x.representative())
    }

    /// Matrix of the map induced by the chain-level map `f` from `H_n(source)` to `H_m(target)`.
    fn chain_induced(
        &mut self,
        n: i64,
        source: u64,
        m: i64,
        target: u64,
        mut f: impl FnMut(&mut Self, &[BigInt]) -> Result<Vec<BigInt>>,
    ) -> Result<IntegerMatrix> {
        let hs = self.get(n, source);
        let ht = self.get(m, target);
        let cols = hs
            .generators
            .iter()
            .map(|g| {
                let img = f(self, g)?;
                ht.coordinates(&img)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerMatrix::from_columns(ht.rank(), &cols))
    }

    /// `H_n(Z/from) -> H_n(Z/to)` induced by the identity on chains (`to` divides `from`).
    pub fn reduction_matrix(&mut self, n: i64, from: u64, to: u64) -> Result<IntegerMatrix> {
        if to == 0 && from != 0 || to != 0 && !from.is_multiple_of(to) {
            return Err(Error::IncompatibleModuli(from, to));
        }
        self.chain_induced(n, from, n, to, |_, z| Ok(z.to_vec()))
    }

    /// `H_n(Z/from) -> H_n(Z/(from·factor))` induced by multiplication by `factor`.
    pub fn multiplication_matrix(&mut self, n: i64, from: u64, factor: u64) -> Result<IntegerMatrix> {
        let f = BigInt::from(factor);
        self.chain_induced(n, from, n, from * factor, |_, z| Ok(z.iter().map(|x| x * &f).collect()))
    }

    /// Connecting map `H_n(Z/l) -> H_{n-1}(Z/a)` of `0 -> Z/a -> Z/al -> Z/l -> 0`.
    pub fn connecting_matrix(&mut self, n: i64, a: u64, l: u64) -> Result<IntegerMatrix> {
        self.chain_induced(n, l, n - 1, a, |g, z| Ok(g.divide_boundary(n, l, a, z)?.1))
    }
}

fn check_k(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("Bockstein needs k >= 2, got {k}")));
    }
    Ok(())
}

fn check_class(c: &ChainComplex, n: i64, k: u64, x: &HomologyClass) -> Result<()> {
    check_k(k)?;
    if n < 0 || n > c.top_dim() as i64 {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            top: c.top_dim() as i64,
        });
    }
    if x.degree() != n || x.modulus() != k {
        return Err(Error::InvalidParameter(format!(
            "class lives in degree {} mod {}, expected degree {n} mod {k}",
            x.degree(),
            x.modulus()
        )));
    }
    Ok(())
}

/// `β(x) ∈ H_{n-1}(C; Z)`.
pub fn beta_integral(c: &ChainComplex, n: i64, k: u64, x: &HomologyClass) -> Result<HomologyClass> {
    check_class(c, n, k, x)?;
    Ok(Groups::new(c).bockstein(x)?.integral_image)
}

/// `β̃(x) ∈ H_{n-1}(C; Z/k)`.
pub fn beta_modk(c: &ChainComplex, n: i64, k: u64, x: &HomologyClass) -> Result<HomologyClass> {
    check_class(c, n, k, x)?;
    Ok(Groups::new(c).bockstein(x)?.modk_image)
}

/// Full Bockstein data of `x`, including the chain witness.
pub fn bockstein(c: &ChainComplex, x: &HomologyClass) -> Result<BocksteinResult> {
    check_class(c, x.degree(), x.modulus(), x)?;
    Groups::new(c).bockstein(x)
}

fn coefficient_label(m: u64) -> String {
    if m == 0 {
        "Z".into()
    } else {
        format!("Z/{m}")
    }
}

/// Exactness of the long sequence of `0 -> Z/a -(×l)-> Z/al -> Z/l -> 0`:
/// `H_n(Z/a) -> H_n(Z/al) -> H_n(Z/l) -> H_{n-1}(Z/a) -> ...` for `n <= max_degree`.
/// `a = 0` gives the integral Bockstein sequence, `a = l = k` the `Z/k²` one.
pub fn verify_coefficient_les(c: &ChainComplex, a: u64, l: u64, max_degree: usize) -> Result<Report> {
    check_k(l)?;
    if a == 1 {
        return Err(Error::InvalidParameter("outer coefficient Z/1 is trivial".into()));
    }
    let al = a * l;
    let (la, lal, ll) = (coefficient_label(a), coefficient_label(al), coefficient_label(l));
    let mut g = Groups::new(c);
    let top = max_degree.min(c.top_dim()) as i64;
    let mut seq = ExactSequence::new();

    let first = g.get(top + 1, l);
    seq.push(format!("H{}({ll})", top + 1), first.orders().to_vec(), None)?;
    let map = |label: &str, matrix| {
        Some(GroupMap {
            label: label.into(),
            matrix,
        })
    };
    for n in (0..=top).rev() {
        let delta = g.connecting_matrix(n + 1, a, l)?;
        seq.push(
            format!("H{n}({la})"),
            g.get(n, a).orders().to_vec(),
            map("connecting", delta),
        )?;
        let times = g.multiplication_matrix(n, a, l)?;
        seq.push(
            format!("H{n}({lal})"),
            g.get(n, al).orders().to_vec(),
            map("multiply", times),
        )?;
        let red = g.reduction_matrix(n, al, l)?;
        seq.push(format!("H{n}({ll})"), g.get(n, l).orders().to_vec(), map("reduce", red))?;
    }
    let last = g.get(0, l).rank();
    seq.push("0", Vec::new(), map("zero", IntegerMatrix::zeros(0, last)))?;

    let mut report = Report::new(format!(
        "long exact sequence of 0 -> {la} -> {lal} -> {ll} -> 0 on {}",
        c.name()
    ));
    crate::homology::record_checks(&mut report, "exact", &check_exactness(&seq));
    Ok(report)
}

/// `... -> H_n(Z) -(×k)-> H_n(Z) -> H_n(Z/k) -(β)-> H_{n-1}(Z) -> ...`
pub fn verify_bockstein_les(c: &ChainComplex, k: u64, max_degree: usize) -> Result<Report> {
    verify_coefficient_les(c, 0, k, max_degree)
}

/// `... -> H_n(Z/k) -(×k)-> H_n(Z/k²) -(i_k)-> H_n(Z/k) -(β̃)-> H_{n-1}(Z/k) -> ...`
pub fn verify_bockstein_les2(c: &ChainComplex, k: u64, max_degree: usize) -> Result<Report> {
    verify_coefficient_les(c, k, k, max_degree)
}

fn coords_eq(g: &HomologyGroup, a: &[BigInt], b: &[BigInt]) -> bool {
    g.normalize(a) == g.normalize(b)
}

fn fmt_coords(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn random_chain(rng: &mut ChaCha8Rng, len: usize) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()
}

/// Recomputes `β` on `z + ∂w + k·u` for random `w`, `u` and compares classes.
pub fn well_definedness(c: &ChainComplex, k: u64, max_degree: usize, seed: u64, trials: usize) -> Result<Report> {
    check_k(k)?;
    let mut g = Groups::new(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kb = BigInt::from(k);
    let mut report = Report::new(format!("Bockstein choice independence on {} mod {k}", c.name())).with_seed(seed);
    for n in 0..=max_degree.min(c.top_dim()) as i64 {
        let h = g.get(n, k);
        for (i, z) in h.generators.iter().enumerate() {
            let base = g.bockstein_of_chain(n, k, z)?;
            let mut agree = 0;
            for _ in 0..trials {
                let w = random_chain(&mut rng, c.rank(n + 1));
                let u = random_chain(&mut rng, c.rank(n));
                let bw = c.apply_boundary(n + 1, &w)?;
                let z2: Vec<BigInt> = z.iter().zip(&bw).zip(&u).map(|((a, b), u)| a + b + &kb * u).collect();
                let other = g.bockstein_of_chain(n, k, &z2)?;
                if other.input == base.input
                    && other.integral_image == base.integral_image
                    && other.modk_image == base.modk_image
                {
                    agree += 1;
                }
            }
            report.check(
                format!("H{n} generator {i}"),
                agree == trials,
                format!("{agree}/{trials} re-lifts give beta = {}", base.integral_image),
            );
        }
    }
    Ok(report)
}

/// Checks the ladder between the two Bockstein sequences on generators:
/// reduction of `β` equals `β̃`, `k·β = 0`, `β̃∘β̃ = 0`, and the squares
/// `ρ_k = i_k ∘ ρ_{k²}` and `ρ_{k²}(k·x) = (×k) ρ_k(x)` on integral classes.
/// Also runs the `(2, 3)` coefficient sequence and the choice-independence trials.
pub fn verify_compatibility(c: &ChainComplex, k: u64, max_degree: usize, seed: u64) -> Result<Report> {
    check_k(k)?;
    let mut g = Groups::new(c);
    let kb = BigInt::from(k);
    let top = max_degree.min(c.top_dim()) as i64;
    let mut report = Report::new(format!("Bockstein compatibility on {} mod {k}", c.name())).with_seed(seed);

    for n in 0..=top {
        let h = g.get(n, k);
        let red = g.reduction_matrix(n - 1, 0, k)?;
        let target = g.get(n - 1, k);
        let integral_target = g.get(n - 1, 0);
        for (i, z) in h.generators.iter().enumerate() {
            let b = g.bockstein_of_chain(n, k, z)?;
            let reduced = red.mul_vec(&b.integral_image.coordinates)?;
            report.check(
                format!("H{n} generator {i}: reduce(beta) = beta~"),
                coords_eq(&target, &reduced, &b.modk_image.coordinates),
                format!("beta = {}, beta~ = {}", b.integral_image, b.modk_image),
            );
            let kbeta = b.integral_image.scale(&kb);
            report.check(
                format!("H{n} generator {i}: k * beta = 0"),
                kbeta.is_zero(),
                format!("in {}", integral_target),
            );
            let again = g.bockstein_of_chain(n - 1, k, &b.modk_image.representative())?;
            report.check(
                format!("H{n} generator {i}: beta~ beta~ = 0"),
                again.modk_image.is_zero(),
                format!("beta~ beta~ = {}", again.modk_image),
            );
        }

        let k2 = k * k;
        let rho_k = g.reduction_matrix(n, 0, k)?;
        let rho_k2 = g.reduction_matrix(n, 0, k2)?;
        let i_k = g.reduction_matrix(n, k2, k)?;
        let times_k = g.multiplication_matrix(n, k, k)?;
        let hz = g.get(n, 0);
        let hk = g.get(n, k);
        let hk2 = g.get(n, k2);
        for i in 0..hz.rank() {
            let r = rho_k.column(i);
            let via = i_k.mul_vec(&rho_k2.column(i))?;
            report.check(
                format!("H{n} integral generator {i}: reduce mod k through k^2"),
                coords_eq(&hk, &r, &via),
                format!(
                    "{} vs {}",
                    fmt_coords(&hk.normalize(&r)),
                    fmt_coords(&hk.normalize(&via))
                ),
            );
            let kx: Vec<BigInt> = hz.generators[i].iter().map(|x| x * &kb).collect();
            let lhs = hk2.coordinates(&kx)?;
            let rhs = times_k.mul_vec(&r)?;
            report.check(
                format!("H{n} integral generator {i}: reduce(k x) = k reduce(x)"),
                coords_eq(&hk2, &lhs, &rhs),
                format!("{} vs {}", fmt_coords(&lhs), fmt_coords(&hk2.normalize(&rhs))),
            );
        }
    }

    report.absorb(
        "coefficients Z/2 -> Z/6 -> Z/3",
        verify_coefficient_les(c, 2, 3, max_degree)?,
    );
    report.absorb("re-lift", well_definedness(c, k, max_degree, seed, DEFAULT_TRIALS)?);
    Ok(report)
}
