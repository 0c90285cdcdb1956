//! Cellular models of the spaces used throughout the crate.
//!
//! Lens spaces and skeleta of `BZ/p` use the minimal structure with one cell
//! `e_i` per dimension and `∂e_{2i} = p e_{2i-1}`, `∂e_{2i+1} = 0`. The Klein
//! bottle uses the word `a b a b^-1`, so `∂F = 2a` and the torsion of `H_1`
//! lives on `a`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::complex::{tensor_complex, ChainComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::exactalg::IntegerMatrix;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn cyclic_cells(p: u64, top: usize, name: String) -> ChainComplex {
    let cells = (0..=top).map(|i| vec![format!("e{i}")]).collect();
    let boundaries = (1..=top)
        .map(|n| {
            let entry = if n % 2 == 0 { BigInt::from(p) } else { BigInt::from(0) };
            IntegerMatrix::from_rows(1, 1, &[vec![entry]]).expect("1x1")
        })
        .collect();
    ChainComplex::new(name, cells, boundaries).expect("one matrix per positive dimension")
}

/// Minimal CW model of `L^{2m-1} = S^{2m-1} / (Z/p)`.
pub fn lens_space(p: u64, m: usize) -> Result<ChainComplex> {
    if p < 2 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "lens space needs p >= 2 and m >= 1, got p={p}, m={m}"
        )));
    }
    Ok(cyclic_cells(p, 2 * m - 1, format!("lens:{p}:{m}")))
}

/// The `d`-skeleton of the standard model of `BZ/p`.
pub fn bzp_skeleton(p: u64, d: usize) -> Result<ChainComplex> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("BZ/p needs p >= 2, got {p}")));
    }
    Ok(cyclic_cells(p, d, format!("bzp:{p}:{d}")))
}

/// One vertex `v`, edges `a`, `b`, one face `F` with `∂F = 2a`.
pub fn klein_bottle() -> ChainComplex {
    ChainComplex::new(
        "klein",
        vec![names(&["v"]), names(&["a", "b"]), names(&["F"])],
        vec![
            IntegerMatrix::from_i64(&[&[0, 0]]),
            IntegerMatrix::from_i64(&[&[2], &[0]]),
        ],
    )
    .expect("static model")
}

pub fn point() -> ChainComplex {
    ChainComplex::new("point", vec![names(&["pt"])], vec![]).expect("static model")
}

pub fn circle() -> ChainComplex {
    ChainComplex::new(
        "circle",
        vec![names(&["v"]), names(&["e"])],
        vec![IntegerMatrix::zeros(1, 1)],
    )
    .expect("static model")
}

/// `S^n` as a vertex plus an `n`-cell; `S^0` is two points.
pub fn sphere(n: usize) -> ChainComplex {
    if n == 0 {
        return ChainComplex::new("sphere:0", vec![names(&["v0", "v1"])], vec![]).expect("static model");
    }
    let mut cells = vec![Vec::new(); n + 1];
    cells[0] = names(&["v"]);
    cells[n] = vec![format!("e{n}")];
    let boundaries = (1..=n)
        .map(|k| IntegerMatrix::zeros(cells[k - 1].len(), cells[k].len()))
        .collect();
    ChainComplex::new(format!("sphere:{n}"), cells, boundaries).expect("consistent shapes")
}

pub fn torus() -> ChainComplex {
    tensor_complex(&circle(), &circle()).with_name("torus")
}

/// Circle with two vertices `v0`, `v1` and edges `e0: v0 -> v1`, `e1: v1 -> v0`.
pub fn circle_two_cells() -> ChainComplex {
    ChainComplex::new(
        "circle2",
        vec![names(&["v0", "v1"]), names(&["e0", "e1"])],
        vec![IntegerMatrix::from_i64(&[&[-1, 1], &[1, -1]])],
    )
    .expect("static model")
}

/// Interval with vertices `0`, `1` and edge `i: 0 -> 1`.
pub fn interval() -> ChainComplex {
    ChainComplex::new(
        "interval",
        vec![names(&["0", "1"]), names(&["i"])],
        vec![IntegerMatrix::from_i64(&[&[-1], &[1]])],
    )
    .expect("static model")
}

/// A complex together with a boundary-closed subcomplex.
#[derive(Clone, Debug)]
pub struct PairModel {
    pub complex: ChainComplex,
    pub sub: Subcomplex,
}

/// A complex covered by two subcomplexes.
#[derive(Clone, Debug)]
pub struct CoverModel {
    pub complex: ChainComplex,
    pub a: Subcomplex,
    pub b: Subcomplex,
}

fn tensor_sub(
    c: &ChainComplex,
    d: &ChainComplex,
    product: &ChainComplex,
    keep: impl Fn(usize, &str, usize, &str) -> bool,
) -> Subcomplex {
    let mut selected = vec![Vec::new(); product.dimensions()];
    for (n, sel) in selected.iter_mut().enumerate() {
        for p in 0..=n {
            for (i, ci) in c.cells(p as i64).iter().enumerate() {
                for (j, dj) in d.cells((n - p) as i64).iter().enumerate() {
                    if keep(p, ci, n - p, dj) {
                        sel.push(crate::complex::tensor_index(c, d, n, p, i, j));
                    }
                }
            }
        }
    }
    Subcomplex::new(product, selected).expect("product of subcomplexes is closed")
}

/// Cylinder `S^1 x [0,1]` relative to its two boundary circles.
pub fn cylinder_pair() -> PairModel {
    let (s, i) = (circle_two_cells(), interval());
    let complex = tensor_complex(&s, &i).with_name("cylinder");
    let sub = tensor_sub(&s, &i, &complex, |_, _, q, _| q == 0);
    PairModel { complex, sub }
}

/// Torus `S^1 x S^1` covered by two cylinders meeting in two circles.
pub fn torus_cylinders() -> CoverModel {
    let s = circle_two_cells();
    let complex = tensor_complex(&s, &s).with_name("torus-fine");
    let a = tensor_sub(&s, &s, &complex, |_, _, _, d| d != "e1");
    let b = tensor_sub(&s, &s, &complex, |_, _, _, d| d != "e0");
    CoverModel { complex, a, b }
}

/// Klein bottle glued from two cylinders, the second attached through a reflection.
///
/// Bottom circle `u0, u1, a0, a1`, middle circle `w0, w1, b0, b1`, vertical edges
/// `h0, h1` (first cylinder) and `g0, g1` (second cylinder). The reflection fixes
/// both vertices and sends `b0 -> -a1`, `b1 -> -a0`.
pub fn klein_cylinders() -> CoverModel {
    let v = names(&["u0", "u1", "w0", "w1"]);
    let e = names(&["a0", "a1", "b0", "b1", "h0", "h1", "g0", "g1"]);
    let f = names(&["F0", "F1", "G0", "G1"]);
    // columns: a0 a1 b0 b1 h0 h1 g0 g1; rows: u0 u1 w0 w1
    let d1 = IntegerMatrix::from_i64(&[
        &[-1, 1, 0, 0, -1, 0, 1, 0],
        &[1, -1, 0, 0, 0, -1, 0, 1],
        &[0, 0, -1, 1, 1, 0, -1, 0],
        &[0, 0, 1, -1, 0, 1, 0, -1],
    ]);
    // F0 = a0 + h1 - b0 - h0, F1 = a1 + h0 - b1 - h1,
    // G0 = b0 + g1 + a1 - g0, G1 = b1 + g0 + a0 - g1
    let d2 = IntegerMatrix::from_i64(&[
        &[1, 0, 0, 1],
        &[0, 1, 1, 0],
        &[-1, 0, 1, 0],
        &[0, -1, 0, 1],
        &[-1, 1, 0, 0],
        &[1, -1, 0, 0],
        &[0, 0, -1, 1],
        &[0, 0, 1, -1],
    ]);
    let complex = ChainComplex::new("klein-fine", vec![v, e, f], vec![d1, d2]).expect("static model");
    let a = Subcomplex::from_names(
        &complex,
        &[
            (0, "u0"),
            (0, "u1"),
            (0, "w0"),
            (0, "w1"),
            (1, "a0"),
            (1, "a1"),
            (1, "b0"),
            (1, "b1"),
            (1, "h0"),
            (1, "h1"),
            (2, "F0"),
            (2, "F1"),
        ],
    )
    .expect("first cylinder is closed");
    let b = Subcomplex::from_names(
        &complex,
        &[
            (0, "u0"),
            (0, "u1"),
            (0, "w0"),
            (0, "w1"),
            (1, "a0"),
            (1, "a1"),
            (1, "b0"),
            (1, "b1"),
            (1, "g0"),
            (1, "g1"),
            (2, "G0"),
            (2, "G1"),
        ],
    )
    .expect("second cylinder is closed");
    CoverModel { complex, a, b }
}

/// Parameterised description of a library space, written `kind:param:param`.
///
/// `point`, `circle`, `torus`, `klein`, `sphere:n`, `lens:p:m`, `bzp:p:d`,
/// `prod:R1,R2` (split at the first comma).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceRecipe {
    Point,
    Circle,
    Torus,
    Klein,
    Sphere(usize),
    Lens { p: u64, m: usize },
    Bzp { p: u64, d: usize },
    Product(Box<SpaceRecipe>, Box<SpaceRecipe>),
}

impl SpaceRecipe {
    pub fn build(&self) -> Result<ChainComplex> {
        Ok(match self {
            Self::Point => point(),
            Self::Circle => circle(),
            Self::Torus => torus(),
            Self::Klein => klein_bottle(),
            Self::Sphere(n) => sphere(*n),
            Self::Lens { p, m } => lens_space(*p, *m)?,
            Self::Bzp { p, d } => bzp_skeleton(*p, *d)?,
            Self::Product(a, b) => product_space(a, b)?,
        })
    }
}

/// Cellular product of two recipes.
pub fn product_space(a: &SpaceRecipe, b: &SpaceRecipe) -> Result<ChainComplex> {
    let (x, y) = (a.build()?, b.build()?);
    Ok(tensor_complex(&x, &y).with_name(format!("prod:{a},{b}")))
}

impl fmt::Display for SpaceRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Point => write!(f, "point"),
            Self::Circle => write!(f, "circle"),
            Self::Torus => write!(f, "torus"),
            Self::Klein => write!(f, "klein"),
            Self::Sphere(n) => write!(f, "sphere:{n}"),
            Self::Lens { p, m } => write!(f, "lens:{p}:{m}"),
            Self::Bzp { p, d } => write!(f, "bzp:{p}:{d}"),
            Self::Product(a, b) => write!(f, "prod:{a},{b}"),
        }
    }
}

impl FromStr for SpaceRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("space recipe `{s}`: {why}"));
        if let Some(rest) = s.strip_prefix("prod:") {
            let (a, b) = rest.split_once(',').ok_or_else(|| bad("product needs two factors"))?;
            return Ok(Self::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64> {
            parts
                .get(i)
                .ok_or_else(|| bad("missing parameter"))?
                .parse::<u64>()
                .map_err(|_| bad("parameter is not a nonnegative integer"))
        };
        let arity = |n: usize| {
            if parts.len() == n {
                Ok(())
            } else {
                Err(bad("wrong number of parameters"))
            }
        };
        let recipe = match parts[0] {
            "point" => Self::Point,
            "circle" => Self::Circle,
            "torus" => Self::Torus,
            "klein" => Self::Klein,
            "sphere" => {
                arity(2)?;
                Self::Sphere(num(1)? as usize)
            }
            "lens" => {
                arity(3)?;
                Self::Lens {
                    p: num(1)?,
                    m: num(2)? as usize,
                }
            }
            "bzp" => {
                arity(3)?;
                Self::Bzp {
                    p: num(1)?,
                    d: num(2)? as usize,
                }
            }
            other => return Err(bad(&format!("unknown kind `{other}`"))),
        };
        if matches!(recipe, Self::Point | Self::Circle | Self::Torus | Self::Klein) {
            arity(1)?;
        }
        Ok(recipe)
    }
}

/// Recipes of the spaces every verification suite runs over.
pub const LIBRARY: &[&str] = &[
    "point",
    "circle",
    "sphere:2",
    "sphere:3",
    "torus",
    "klein",
    "lens:2:3",
    "lens:3:4",
    "lens:5:2",
    "bzp:2:6",
    "bzp:3:9",
    "bzp:5:9",
    "prod:lens:3:2,lens:3:2",
];

/// The library spaces plus the finer decomposition models.
pub fn library() -> Vec<ChainComplex> {
    let mut out: Vec<ChainComplex> = LIBRARY
        .iter()
        .map(|r| {
            r.parse::<SpaceRecipe>()
                .and_then(|r| r.build())
                .expect("library recipes are valid")
        })
        .collect();
    out.push(torus_cylinders().complex);
    out.push(klein_cylinders().complex);
    out.push(cylinder_pair().complex);
    out
}
