//! Randomized invariants, each checked against an oracle written here from scratch.

#![allow(clippy::needless_range_loop)]

use homcalc::bockstein::Groups;
use homcalc::complex::{ChainComplex, ChainMap};
use homcalc::exactalg::{
    cokernel_presentation, kernel_basis, rank_mod_prime, smith_normal_form, solve_linear, IntegerMatrix,
};
use homcalc::formalbord::{formal_boundary, FormalExpression, SymbolTable};
use homcalc::homology::{homology, induced_map};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| IntegerMatrix::from_rows(r, c, &rows).unwrap())
    })
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

// Fraction-free elimination: rank over Q.
fn rank_q(m: &IntegerMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let (rows, cols) = m.shape();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            let f = a[i][c].clone();
            let g = a[rank][c].clone();
            for j in 0..cols {
                a[i][j] = &a[i][j] * &g - &a[rank][j] * &f;
            }
        }
        rank += 1;
    }
    rank
}

fn rank_fp(m: &IntegerMatrix, p: i64) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<i64>> = (0..rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| (x % big(p)).try_into().map(|v: i64| v.rem_euclid(p)).unwrap())
                .collect()
        })
        .collect();
    let inv = |x: i64| (1..p).find(|y| (x * y) % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let s = inv(a[rank][c]);
        for j in 0..cols {
            a[rank][j] = a[rank][j] * s % p;
        }
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &a[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// gcd of all r x r minors.
fn minor_gcd(m: &IntegerMatrix, r: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rs in subsets(m.rows(), r) {
        for cs in subsets(m.cols(), r) {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                .collect();
            g = g.gcd(&det(&sub));
        }
    }
    g
}

fn mul(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
    a.try_mul(b).unwrap()
}

/// Random three-term complex `C_3 -> C_2 -> C_1 -> C_0` with ∂∂ = 0 by construction:
/// each boundary factors through the annihilator of the image of the next one.
fn complex_strategy() -> impl Strategy<Value = ChainComplex> {
    (0usize..=3, 1usize..=3, 1usize..=3, 0usize..=3, any::<u64>()).prop_map(|(r0, r1, r2, r3, seed)| {
        let ranks = [r0, r1, r2, r3];
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 5) as i64 - 2
        };
        let mut random = |r: usize, c: usize| {
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| next()).collect()).collect();
            IntegerMatrix::from_rows(r, c, &rows).unwrap()
        };
        let d3 = random(ranks[2], ranks[3]);
        let k2 = kernel_basis(&d3.transpose(), 0);
        let d2 = mul(&random(ranks[1], k2.cols()), &k2.transpose());
        let k1 = kernel_basis(&d2.transpose(), 0);
        let d1 = mul(&random(ranks[0], k1.cols()), &k1.transpose());
        let cells = ranks
            .iter()
            .enumerate()
            .map(|(n, &r)| (0..r).map(|i| format!("c{n}_{i}")).collect())
            .collect();
        ChainComplex::new("random", cells, vec![d1, d2, d3]).unwrap()
    })
}

fn group_order_mod(orders: &[BigInt], k: &BigInt) -> BigInt {
    // |G ⊗ Z/k| for G = ⊕ Z/d (d = 0 for Z)
    orders.iter().fold(BigInt::one(), |acc, d| acc * d.gcd(k))
}

fn tor_order(orders: &[BigInt], k: &BigInt) -> BigInt {
    orders
        .iter()
        .filter(|d| !d.is_zero())
        .fold(BigInt::one(), |acc, d| acc * d.gcd(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_decomposition_is_valid(m in matrix(5, 5, 9)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(mul(&mul(&s.u, &m), &s.v), s.d.clone());
        prop_assert_eq!(mul(&s.u, &s.u_inv), IntegerMatrix::identity(m.rows()));
        prop_assert_eq!(mul(&s.v, &s.v_inv), IntegerMatrix::identity(m.cols()));
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.diagonal.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[1].is_zero() { continue; }
            prop_assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(s.rank, rank_q(&m));
    }

    #[test]
    fn invariant_factors_match_minors(m in matrix(4, 4, 6)) {
        let s = smith_normal_form(&m);
        let mut prod = BigInt::one();
        for r in 1..=s.rank {
            prod *= &s.diagonal[r - 1];
            prop_assert_eq!(prod.clone(), minor_gcd(&m, r));
        }
    }

    #[test]
    fn cokernel_order_and_rank(m in matrix(4, 4, 6)) {
        let c = cokernel_presentation(&m);
        let r = rank_q(&m);
        prop_assert_eq!(c.free_rank, m.rows() - r);
        let torsion: BigInt = c.torsion.iter().product();
        let expected = if r == 0 { BigInt::one() } else { minor_gcd(&m, r) };
        prop_assert_eq!(torsion, expected);
        for d in &c.torsion {
            prop_assert!(*d > BigInt::one());
        }
    }

    #[test]
    fn rank_mod_prime_matches_elimination(m in matrix(5, 5, 9), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assert_eq!(rank_mod_prime(&m, p), rank_fp(&m, p as i64));
    }

    #[test]
    fn solve_and_kernel(m in matrix(5, 5, 9), x in proptest::collection::vec(-9i64..=9, 5), k in 0u64..12) {
        let x: Vec<BigInt> = x[..m.cols()].iter().map(|&v| big(v)).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve_linear(&m, &b, k).unwrap();
        prop_assert!(y.is_some());
        let got = m.mul_vec(&y.unwrap()).unwrap();
        let kk = big(k as i64);
        for (g, e) in got.iter().zip(&b) {
            if k == 0 {
                prop_assert_eq!(g, e);
            } else {
                prop_assert!(((g - e) % &kk).is_zero());
            }
        }
        let kb = kernel_basis(&m, k);
        let prod = mul(&m, &kb);
        if k == 0 {
            prop_assert!(prod.is_zero());
            prop_assert_eq!(kb.cols(), m.cols() - rank_q(&m));
        } else {
            prop_assert!(prod.is_zero_mod(&kk));
        }
    }

    #[test]
    fn universal_coefficients(c in complex_strategy(), k in 2u64..=12) {
        let kk = big(k as i64);
        for n in 0..=3i64 {
            let hn = homology(&c, n, 0).unwrap();
            let below: Vec<BigInt> = if n == 0 { vec![] } else { homology(&c, n - 1, 0).unwrap().orders().to_vec() };
            let modk = homology(&c, n, k).unwrap();
            let order = modk.order().unwrap();
            prop_assert_eq!(order, group_order_mod(hn.orders(), &kk) * tor_order(&below, &kk));
        }
    }

    #[test]
    fn euler_characteristic(c in complex_strategy()) {
        let betti: i64 = (0..=3i64).map(|n| {
            let r = homology(&c, n, 0).unwrap().free_rank as i64;
            if n % 2 == 0 { r } else { -r }
        }).sum();
        prop_assert_eq!(betti, c.euler_characteristic());
    }

    #[test]
    fn bockstein_reduces_to_modk_bockstein(c in complex_strategy(), k in 2u64..=9) {
        let mut g = Groups::new(&c);
        for n in 1..=3i64 {
            let h = g.get(n, k);
            for z in h.generators.clone() {
                let b = g.bockstein_of_chain(n, k, &z).unwrap();
                let reduced = g.classify(n - 1, k, &b.integral_image.representative()).unwrap();
                prop_assert_eq!(&reduced, &b.modk_image);
                prop_assert!(b.integral_image.scale(&kk(k)).is_zero());
            }
        }
    }

    #[test]
    fn homotopic_maps_induce_the_same_map(
        c in complex_strategy(),
        s in -3i64..=3,
        t in -3i64..=3,
        seed in any::<u64>(),
        modulus in prop::sample::select(vec![0u64, 2, 3, 4]),
    ) {
        // f = s + ∂h + h∂, g = t + ∂h' + h'∂; then f_* = s, (g∘f)_* = g_* f_*
        let f_comp = homotopic_scalar(&c, s, seed);
        let g_comp = homotopic_scalar(&c, t, seed.rotate_left(17) ^ 0x9e37);
        let f = ChainMap::new(&c, &c, f_comp).unwrap();
        let g = ChainMap::new(&c, &c, g_comp).unwrap();
        let gf = f.then(&g).unwrap();
        for n in 0..=3i64 {
            let h = homology(&c, n, modulus).unwrap();
            let fs = induced_map(&f, n, modulus).unwrap();
            let gs = induced_map(&g, n, modulus).unwrap();
            let gfs = induced_map(&gf, n, modulus).unwrap();
            let orders = h.orders();
            let scalar_s = IntegerMatrix::scalar(orders.len(), &big(s));
            let composed = mul(&gs, &fs);
            let scalar_st = IntegerMatrix::scalar(orders.len(), &big(s * t));
            for i in 0..orders.len() {
                for j in 0..orders.len() {
                    let same = |a: &BigInt, b: &BigInt| {
                        if orders[i].is_zero() { a == b } else { ((a - b) % &orders[i]).is_zero() }
                    };
                    prop_assert!(same(fs.get(i, j), scalar_s.get(i, j)));
                    prop_assert!(same(gfs.get(i, j), composed.get(i, j)));
                    prop_assert!(same(gfs.get(i, j), scalar_st.get(i, j)));
                }
            }
        }
    }

    #[test]
    fn formal_boundary_squares_to_zero(terms in proptest::collection::vec((1i64..5, proptest::collection::vec(0usize..SYMBOLS.len(), 0..4)), 1..4), p in prop::sample::select(vec![3u64, 5, 7])) {
        let table = SymbolTable::standard(p);
        for (coeff, idx) in &terms {
            let names: Vec<&str> = idx.iter().map(|&i| SYMBOLS[i]).collect();
            let e = FormalExpression::term(*coeff, &names);
            let d = formal_boundary(&e, &table).unwrap();
            let dd = formal_boundary(&d, &table).unwrap();
            prop_assert!(dd.is_zero(), "{} -> {} -> {}", e, d, dd);
            prop_assert_eq!(e.canonicalize(), e.canonicalize().canonicalize());
            prop_assert_eq!(d.clone(), d.canonicalize());
        }
    }

    #[test]
    fn formal_leibniz(a in proptest::collection::vec(0usize..SYMBOLS.len(), 1..3), b in proptest::collection::vec(0usize..SYMBOLS.len(), 1..3)) {
        let table = SymbolTable::standard(3);
        let ea = FormalExpression::term(1, &a.iter().map(|&i| SYMBOLS[i]).collect::<Vec<_>>());
        let eb = FormalExpression::term(1, &b.iter().map(|&i| SYMBOLS[i]).collect::<Vec<_>>());
        let da = formal_boundary(&ea, &table).unwrap();
        let db = formal_boundary(&eb, &table).unwrap();
        let dim_a = ea.dimension(&table).unwrap().unwrap();
        let sign = if dim_a.is_multiple_of(2) { big(1) } else { big(-1) };
        let expected = da.times(&eb).add(&ea.times(&db).scale(&sign));
        prop_assert_eq!(formal_boundary(&ea.times(&eb), &table).unwrap(), expected);
    }
}

const SYMBOLS: [&str; 10] = ["pt", "L1", "L3", "a1", "a5", "T2", "T4", "M4", "c(M4)", "c(M8)"];

fn kk(k: u64) -> BigInt {
    BigInt::from(k)
}

fn homotopic_scalar(c: &ChainComplex, s: i64, seed: u64) -> Vec<IntegerMatrix> {
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 3) as i64 - 1
    };
    // h_n : C_n -> C_{n+1}
    let h: Vec<IntegerMatrix> = (0..4i64)
        .map(|n| {
            let (r, cc) = (c.rank(n + 1), c.rank(n));
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..cc).map(|_| next()).collect()).collect();
            IntegerMatrix::from_rows(r, cc, &rows).unwrap()
        })
        .collect();
    (0..4i64)
        .map(|n| {
            let r = c.rank(n);
            let mut f = IntegerMatrix::scalar(r, &big(s));
            let dh = mul(&c.boundary(n + 1), &h[n as usize]);
            f = add(&f, &dh);
            if n > 0 {
                let hd = mul(&h[n as usize - 1], &c.boundary(n));
                f = add(&f, &hd);
            }
            f
        })
        .collect()
}

fn add(a: &IntegerMatrix, b: &IntegerMatrix) -> IntegerMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j) + b.get(i, j));
        }
    }
    out
}

#[test]
fn random_complexes_are_not_degenerate() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let (mut torsion, mut nonzero_d2) = (0, 0);
    for _ in 0..200 {
        let c = complex_strategy().new_tree(&mut runner).unwrap().current();
        if !c.boundary(2).is_zero() {
            nonzero_d2 += 1;
        }
        if (0..=3).any(|n| !homology(&c, n, 0).unwrap().torsion.is_empty()) {
            torsion += 1;
        }
    }
    assert!(nonzero_d2 > 80, "{nonzero_d2}");
    assert!(torsion > 20, "{torsion}");
}
