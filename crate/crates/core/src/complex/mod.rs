//! Cellular chain complexes stored integrally.
//!
//! Orientation conventions live entirely in the signs of the boundary
//! matrices; nothing here infers them. Coefficients are not a property of a
//! complex: homology operations take the modulus as a parameter.

mod format;

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::IntegerMatrix;

pub use format::{from_document, to_document};

/// First failing invariant found by [`ChainComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub dimension: usize,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    DuplicateCell(String),
    /// Entry `(row, col)` of `∂_n ∘ ∂_{n+1}` is `value` instead of zero.
    BoundarySquare {
        row: usize,
        col: usize,
        value: BigInt,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dimension;
        match &self.kind {
            ViolationKind::Shape { expected, found } => write!(
                f,
                "boundary matrix d_{n} has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            ViolationKind::DuplicateCell(name) => {
                write!(f, "cell name `{name}` repeated in dimension {n}")
            }
            ViolationKind::BoundarySquare { row, col, value } => {
                write!(f, "d_{n} * d_{} is nonzero at ({row},{col}): {value}", n + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    name: String,
    cells: Vec<Vec<String>>,
    /// `boundaries[n - 1]` is `∂_n`, of shape `|cells[n-1]| x |cells[n]|`.
    boundaries: Vec<IntegerMatrix>,
}

impl ChainComplex {
    /// Assembles a complex without checking the chain condition; see [`Self::validate`].
    pub fn new(name: impl Into<String>, cells: Vec<Vec<String>>, boundaries: Vec<IntegerMatrix>) -> Result<Self> {
        if boundaries.len() != cells.len().saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} cell dimensions need {} boundary matrices, got {}",
                cells.len(),
                cells.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            cells,
            boundaries,
        })
    }

    /// [`Self::new`] followed by [`Self::validate`].
    pub fn validated(name: impl Into<String>, cells: Vec<Vec<String>>, boundaries: Vec<IntegerMatrix>) -> Result<Self> {
        let c = Self::new(name, cells, boundaries)?;
        c.validate().map_err(Error::Validation)?;
        Ok(c)
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            cells: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Highest dimension carrying a (possibly empty) cell list; `0` for the empty complex.
    pub fn top_dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn dimensions(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(Vec::is_empty)
    }

    pub fn cells(&self, n: i64) -> &[String] {
        if n < 0 {
            return &[];
        }
        self.cells.get(n as usize).map_or(&[], Vec::as_slice)
    }

    pub fn all_cells(&self) -> &[Vec<String>] {
        &self.cells
    }

    pub fn rank(&self, n: i64) -> usize {
        self.cells(n).len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn cell_index(&self, n: i64, name: &str) -> Option<usize> {
        self.cells(n).iter().position(|c| c == name)
    }

    /// `∂_n` for any integer `n`; outside `1..=top_dim` this is the appropriately
    /// shaped empty matrix.
    pub fn boundary(&self, n: i64) -> Cow<'_, IntegerMatrix> {
        if n >= 1 && (n as usize) <= self.boundaries.len() {
            Cow::Borrowed(&self.boundaries[n as usize - 1])
        } else {
            Cow::Owned(IntegerMatrix::zeros(self.rank(n - 1), self.rank(n)))
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// Checks shapes, name uniqueness and `∂∂ = 0`, reporting the first failure
    /// in increasing dimension.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for (n, names) in self.cells.iter().enumerate() {
            let mut seen = HashSet::new();
            if let Some(dup) = names.iter().find(|c| !seen.insert(c.as_str())) {
                return Err(Violation {
                    dimension: n,
                    kind: ViolationKind::DuplicateCell(dup.clone()),
                });
            }
        }
        for (idx, m) in self.boundaries.iter().enumerate() {
            let n = idx + 1;
            let expected = (self.rank(n as i64 - 1), self.rank(n as i64));
            if m.shape() != expected {
                return Err(Violation {
                    dimension: n,
                    kind: ViolationKind::Shape {
                        expected,
                        found: m.shape(),
                    },
                });
            }
        }
        for n in 1..self.boundaries.len() {
            let sq = &self.boundaries[n - 1] * &self.boundaries[n];
            for i in 0..sq.rows() {
                for j in 0..sq.cols() {
                    if !sq.get(i, j).is_zero() {
                        return Err(Violation {
                            dimension: n,
                            kind: ViolationKind::BoundarySquare {
                                row: i,
                                col: j,
                                value: sq.get(i, j).clone(),
                            },
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies `∂_n` to a chain of dimension `n`.
    pub fn apply_boundary(&self, n: i64, chain: &[BigInt]) -> Result<Vec<BigInt>> {
        self.boundary(n).mul_vec(chain)
    }

    /// Cells of dimension `≤ d`.
    pub fn skeleton(&self, d: usize) -> Subcomplex {
        let selected = (0..self.cells.len())
            .map(|n| {
                if n <= d {
                    (0..self.cells[n].len()).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Subcomplex {
            counts: self.counts(),
            selected,
        }
    }

    fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }
}

/// A set of cells of a parent complex closed under the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    counts: Vec<usize>,
    /// Sorted cell indices per dimension.
    selected: Vec<Vec<usize>>,
}

impl Subcomplex {
    /// Checks indices and boundary closure against `parent`.
    pub fn new(parent: &ChainComplex, mut selected: Vec<Vec<usize>>) -> Result<Self> {
        if selected.len() > parent.dimensions() {
            return Err(Error::DimensionMismatch(format!(
                "subcomplex lists {} dimensions, parent has {}",
                selected.len(),
                parent.dimensions()
            )));
        }
        selected.resize(parent.dimensions(), Vec::new());
        for (n, s) in selected.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&i| i >= parent.rank(n as i64)) {
                return Err(Error::DimensionMismatch(format!(
                    "cell index {bad} out of range in dimension {n}"
                )));
            }
        }
        let sub = Self {
            counts: parent.counts(),
            selected,
        };
        sub.check_closed(parent)?;
        Ok(sub)
    }

    /// Subcomplex from `(dimension, cell name)` pairs.
    pub fn from_names(parent: &ChainComplex, names: &[(usize, &str)]) -> Result<Self> {
        let mut selected = vec![Vec::new(); parent.dimensions()];
        for &(n, name) in names {
            let idx = parent
                .cell_index(n as i64, name)
                .ok_or_else(|| Error::InvalidParameter(format!("no cell `{name}` in dimension {n}")))?;
            selected[n].push(idx);
        }
        Self::new(parent, selected)
    }

    pub fn empty(parent: &ChainComplex) -> Self {
        Self {
            counts: parent.counts(),
            selected: vec![Vec::new(); parent.dimensions()],
        }
    }

    pub fn full(parent: &ChainComplex) -> Self {
        parent.skeleton(parent.top_dim())
    }

    fn check_closed(&self, parent: &ChainComplex) -> Result<()> {
        self.check_parent(parent)?;
        for n in 1..self.selected.len() {
            let d = parent.boundary(n as i64);
            for &j in &self.selected[n] {
                for i in 0..d.rows() {
                    if !d.get(i, j).is_zero() && !self.contains(n - 1, i) {
                        return Err(Error::NotClosed(format!(
                            "boundary of `{}` (dim {n}) meets `{}` outside the subcomplex",
                            parent.cells(n as i64)[j],
                            parent.cells(n as i64 - 1)[i]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_parent(&self, parent: &ChainComplex) -> Result<()> {
        if self.counts != parent.counts() {
            return Err(Error::DimensionMismatch(
                "subcomplex was built for a different complex".into(),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, n: usize, idx: usize) -> bool {
        self.selected.get(n).is_some_and(|s| s.binary_search(&idx).is_ok())
    }

    pub fn indices(&self, n: i64) -> &[usize] {
        if n < 0 {
            return &[];
        }
        self.selected.get(n as usize).map_or(&[], Vec::as_slice)
    }

    /// Parent cells of dimension `n` not in the subcomplex.
    pub fn complement(&self, n: i64) -> Vec<usize> {
        if n < 0 || n as usize >= self.counts.len() {
            return Vec::new();
        }
        (0..self.counts[n as usize])
            .filter(|&i| !self.contains(n as usize, i))
            .collect()
    }

    pub fn cell_count(&self) -> usize {
        self.selected.iter().map(Vec::len).sum()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(self.counts, other.counts, "subcomplexes of different complexes");
        let selected = self
            .counts
            .iter()
            .enumerate()
            .map(|(n, &c)| {
                (0..c)
                    .filter(|&i| keep(self.contains(n, i), other.contains(n, i)))
                    .collect()
            })
            .collect();
        Self {
            counts: self.counts.clone(),
            selected,
        }
    }

    /// The subcomplex as a complex in its own right.
    pub fn complex(&self, parent: &ChainComplex) -> Result<ChainComplex> {
        self.check_parent(parent)?;
        let cells = (0..parent.dimensions())
            .map(|n| {
                self.selected[n]
                    .iter()
                    .map(|&i| parent.cells(n as i64)[i].clone())
                    .collect()
            })
            .collect();
        let boundaries = (1..parent.dimensions())
            .map(|n| {
                parent
                    .boundary(n as i64)
                    .select_rows(&self.selected[n - 1])
                    .select_cols(&self.selected[n])
            })
            .collect();
        ChainComplex::new(format!("{}|sub", parent.name()), cells, boundaries)
    }

    /// Extends a chain on the subcomplex by zero to a chain of the parent.
    pub fn embed(&self, n: i64, chain: &[BigInt]) -> Vec<BigInt> {
        let idx = self.indices(n);
        let total = if n < 0 {
            0
        } else {
            self.counts.get(n as usize).copied().unwrap_or(0)
        };
        let mut out = vec![BigInt::zero(); total];
        for (&i, x) in idx.iter().zip(chain) {
            out[i] = x.clone();
        }
        out
    }

    /// Coefficients of a parent chain on the subcomplex cells.
    pub fn restrict(&self, n: i64, chain: &[BigInt]) -> Vec<BigInt> {
        self.indices(n).iter().map(|&i| chain[i].clone()).collect()
    }

    /// Coefficients of a parent chain on the cells outside the subcomplex.
    pub fn restrict_complement(&self, n: i64, chain: &[BigInt]) -> Vec<BigInt> {
        self.complement(n).iter().map(|&i| chain[i].clone()).collect()
    }

    /// Extends a chain on the complement cells by zero.
    pub fn embed_complement(&self, n: i64, chain: &[BigInt]) -> Vec<BigInt> {
        let comp = self.complement(n);
        let total = if n < 0 {
            0
        } else {
            self.counts.get(n as usize).copied().unwrap_or(0)
        };
        let mut out = vec![BigInt::zero(); total];
        for (&i, x) in comp.iter().zip(chain) {
            out[i] = x.clone();
        }
        out
    }

    /// Inclusion `A -> C` as a chain map between `self.complex(parent)` and `parent`.
    pub fn inclusion_components(&self, parent: &ChainComplex) -> Vec<IntegerMatrix> {
        (0..parent.dimensions())
            .map(|n| {
                let sel = &self.selected[n];
                let mut m = IntegerMatrix::zeros(parent.rank(n as i64), sel.len());
                for (col, &i) in sel.iter().enumerate() {
                    m.set(i, col, BigInt::one());
                }
                m
            })
            .collect()
    }
}

/// Quotient complex `C / A`: the cells of `A` and their rows and columns are deleted.
pub fn relative_complex(c: &ChainComplex, a: &Subcomplex) -> Result<ChainComplex> {
    a.check_closed(c)?;
    let cells = (0..c.dimensions())
        .map(|n| {
            a.complement(n as i64)
                .into_iter()
                .map(|i| c.cells(n as i64)[i].clone())
                .collect()
        })
        .collect();
    let boundaries = (1..c.dimensions())
        .map(|n| {
            c.boundary(n as i64)
                .select_rows(&a.complement(n as i64 - 1))
                .select_cols(&a.complement(n as i64))
        })
        .collect();
    ChainComplex::new(format!("{}/sub", c.name()), cells, boundaries)
}

/// Position of the first product cell `c ⊗ d` with `dim c = p` among the
/// dimension-`n` cells of `tensor_complex(c, d)`.
pub fn tensor_offset(c: &ChainComplex, d: &ChainComplex, n: usize, p: usize) -> usize {
    (0..p).map(|q| c.rank(q as i64) * d.rank(n as i64 - q as i64)).sum()
}

/// Index of `c_i ⊗ d_j` (with `dim c_i = p`) in dimension `n` of the tensor complex.
pub fn tensor_index(c: &ChainComplex, d: &ChainComplex, n: usize, p: usize, i: usize, j: usize) -> usize {
    tensor_offset(c, d, n, p) + i * d.rank(n as i64 - p as i64) + j
}

/// Cellular product with the Koszul differential
/// `∂(c ⊗ d) = ∂c ⊗ d + (-1)^{dim c} c ⊗ ∂d`.
///
/// Dimension-`n` cells are ordered with the left factor major: by `dim c`,
/// then by the index of `c`, then by the index of `d`.
pub fn tensor_complex(c: &ChainComplex, d: &ChainComplex) -> ChainComplex {
    if c.is_empty() || d.is_empty() {
        return ChainComplex::empty(format!("{}x{}", c.name(), d.name()));
    }
    let top = c.top_dim() + d.top_dim();
    let mut cells = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut names = Vec::new();
        for p in 0..=n {
            for ci in c.cells(p as i64) {
                for dj in d.cells(n as i64 - p as i64) {
                    names.push(format!("{ci}⊗{dj}"));
                }
            }
        }
        cells.push(names);
    }
    let mut boundaries = Vec::with_capacity(top);
    for n in 1..=top {
        let mut m = IntegerMatrix::zeros(cells[n - 1].len(), cells[n].len());
        for p in 0..=n {
            let q = n - p;
            let dc = c.boundary(p as i64);
            let dd = d.boundary(q as i64);
            let sign = if p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            for i in 0..c.rank(p as i64) {
                for j in 0..d.rank(q as i64) {
                    let col = tensor_index(c, d, n, p, i, j);
                    if p >= 1 {
                        for r in 0..dc.rows() {
                            let a = dc.get(r, i);
                            if !a.is_zero() {
                                let row = tensor_index(c, d, n - 1, p - 1, r, j);
                                let v = m.get(row, col) + a;
                                m.set(row, col, v);
                            }
                        }
                    }
                    if q >= 1 {
                        for r in 0..dd.rows() {
                            let b = dd.get(r, j);
                            if !b.is_zero() {
                                let row = tensor_index(c, d, n - 1, p, i, r);
                                let v = m.get(row, col) + &sign * b;
                                m.set(row, col, v);
                            }
                        }
                    }
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex::new(format!("{}x{}", c.name(), d.name()), cells, boundaries).expect("shapes built consistently")
}

/// Degree-preserving chain map given by one matrix per dimension.
#[derive(Clone, Debug)]
pub struct ChainMap<'a> {
    source: &'a ChainComplex,
    target: &'a ChainComplex,
    components: Vec<IntegerMatrix>,
}

impl<'a> ChainMap<'a> {
    /// Checks shapes and `f_{n-1} ∂ = ∂ f_n`. Missing components are zero.
    pub fn new(source: &'a ChainComplex, target: &'a ChainComplex, mut components: Vec<IntegerMatrix>) -> Result<Self> {
        if components.len() > source.dimensions() {
            return Err(Error::InvalidChainMap(format!(
                "{} components for a source with {} dimensions",
                components.len(),
                source.dimensions()
            )));
        }
        while components.len() < source.dimensions() {
            let n = components.len() as i64;
            components.push(IntegerMatrix::zeros(target.rank(n), source.rank(n)));
        }
        for (n, f) in components.iter().enumerate() {
            let expected = (target.rank(n as i64), source.rank(n as i64));
            if f.shape() != expected {
                return Err(Error::InvalidChainMap(format!(
                    "component {n} has shape {:?}, expected {:?}",
                    f.shape(),
                    expected
                )));
            }
        }
        let map = Self {
            source,
            target,
            components,
        };
        for n in 1..source.dimensions() {
            let lhs = &*map.component(n as i64 - 1) * &source.boundary(n as i64);
            let rhs = &*target.boundary(n as i64) * &map.component(n as i64);
            if lhs != rhs {
                return Err(Error::InvalidChainMap(format!(
                    "map does not commute with the boundary in dimension {n}"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &'a ChainComplex) -> Self {
        let components = (0..c.dimensions())
            .map(|n| IntegerMatrix::identity(c.rank(n as i64)))
            .collect();
        Self {
            source: c,
            target: c,
            components,
        }
    }

    pub fn source(&self) -> &'a ChainComplex {
        self.source
    }

    pub fn target(&self) -> &'a ChainComplex {
        self.target
    }

    pub fn component(&self, n: i64) -> Cow<'_, IntegerMatrix> {
        if n >= 0 && (n as usize) < self.components.len() {
            Cow::Borrowed(&self.components[n as usize])
        } else {
            Cow::Owned(IntegerMatrix::zeros(self.target.rank(n), self.source.rank(n)))
        }
    }

    /// `other ∘ self`.
    pub fn then<'b>(&self, other: &ChainMap<'b>) -> Result<ChainMap<'a>>
    where
        'b: 'a,
    {
        if !std::ptr::eq(self.target, other.source) && self.target != other.source {
            return Err(Error::InvalidChainMap("composed maps do not share a complex".into()));
        }
        let components = (0..self.source.dimensions())
            .map(|n| &*other.component(n as i64) * &self.component(n as i64))
            .collect();
        Ok(ChainMap {
            source: self.source,
            target: other.target,
            components,
        })
    }
}
