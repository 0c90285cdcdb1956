//! Formal linear combinations of ordered products of symbols with a
//! Leibniz boundary `∂(A × B) = ∂A × B + (-1)^{dim A} A × ∂B`.
//!
//! Text form: `3*L1xL5 - 1*c(M4)xa1`, every term with an explicit
//! coefficient, `0` for the empty expression. Symbol names may not contain
//! `x`, `*`, `+`, `-` or whitespace.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::divisible;
use crate::products::{is_prime, kernel_basis_classes, kernel_basis_terms};
use crate::report::Report;

/// An ordered product of symbol names; the empty product is the unit.
pub type Monomial = Vec<String>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FormalExpression {
    terms: Vec<(BigInt, Monomial)>,
}

impl FormalExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Terms as given, not canonicalized.
    pub fn from_raw_terms(terms: Vec<(BigInt, Monomial)>) -> Self {
        Self { terms }
    }

    /// Canonical expression from terms.
    pub fn new(terms: Vec<(BigInt, Monomial)>) -> Self {
        Self::from_raw_terms(terms).canonicalize()
    }

    pub fn term(coeff: impl Into<BigInt>, factors: &[&str]) -> Self {
        Self::new(vec![(coeff.into(), factors.iter().map(|s| s.to_string()).collect())])
    }

    pub fn terms(&self) -> &[(BigInt, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.is_zero())
    }

    /// Sorts terms by factor list, merges equal monomials, drops zero coefficients.
    pub fn canonicalize(&self) -> Self {
        let mut merged: BTreeMap<&Monomial, BigInt> = BTreeMap::new();
        for (c, m) in &self.terms {
            *merged.entry(m).or_insert_with(BigInt::zero) += c;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m.clone()))
            .collect();
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(terms)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.terms.iter().map(|(c, m)| (c * k, m.clone())).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Ordered product `self × other`.
    pub fn times(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, m) in &self.terms {
            for (b, n) in &other.terms {
                let mut f = m.clone();
                f.extend(n.iter().cloned());
                terms.push((a * b, f));
            }
        }
        Self::new(terms)
    }

    /// Common dimension of all terms, `None` for the zero expression.
    pub fn dimension(&self, table: &SymbolTable) -> Result<Option<u32>> {
        let mut dim = None;
        for (c, m) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let d = table.monomial_dimension(m)?;
            match dim {
                None => dim = Some(d),
                Some(e) if e != d => return Err(Error::MixedDimensions(e, d)),
                _ => {}
            }
        }
        Ok(dim)
    }

    /// True iff every coefficient is divisible by `p`.
    pub fn divisible_by(&self, p: &BigInt) -> bool {
        self.terms.iter().all(|(c, _)| divisible(c, p))
    }
}

impl fmt::Display for FormalExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (c, m)) in self.terms.iter().enumerate() {
            let body = if m.is_empty() { "1".to_string() } else { m.join("x") };
            match (idx, c.is_negative()) {
                (0, _) => write!(f, "{c}*{body}")?,
                (_, false) => write!(f, " + {c}*{body}")?,
                (_, true) => write!(f, " - {}*{body}", c.abs())?,
            }
        }
        Ok(())
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s != "1"
        && !s
            .chars()
            .any(|c| matches!(c, 'x' | '*' | '+' | '-') || c.is_whitespace())
}

impl FromStr for FormalExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("expression `{s}`: {why}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "0" {
            return Ok(Self::zero());
        }
        if text.is_empty() {
            return Err(bad("empty"));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                pieces.push(&text[start..i]);
                start = i;
            }
        }
        pieces.push(&text[start..]);

        let mut terms = Vec::new();
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'+') => (BigInt::one(), &piece[1..]),
                Some(b'-') => (-BigInt::one(), &piece[1..]),
                _ => (BigInt::one(), piece),
            };
            let (coeff, product) = body.split_once('*').ok_or_else(|| bad("term without `coefficient*`"))?;
            let coeff: BigInt = coeff.parse().map_err(|_| bad("coefficient is not an integer"))?;
            if coeff.is_negative() {
                return Err(bad("doubled sign"));
            }
            let factors: Monomial = if product == "1" {
                Vec::new()
            } else {
                product.split('x').map(str::to_owned).collect()
            };
            if let Some(f) = factors.iter().find(|f| !valid_name(f)) {
                return Err(bad(&format!("bad symbol name `{f}`")));
            }
            terms.push((sign * coeff, factors));
        }
        Ok(Self::new(terms))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSymbol {
    pub name: String,
    pub dimension: u32,
    pub boundary: FormalExpression,
}

/// Declared symbols, optionally backed by the built-in families for a prime `p`:
/// `pt` (dim 0), `L{d}` and `a{d}` (closed), `T{2i}` with `∂T{2i} = p·L{2i-1}`,
/// `M{4j}` (closed) and `c(M{4j})` with `∂c(M{4j}) = M{4j}`.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    p: Option<u64>,
    declared: BTreeMap<String, FormalSymbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn standard(p: u64) -> Self {
        Self {
            p: Some(p),
            declared: BTreeMap::new(),
        }
    }

    /// Declares a symbol; its boundary must use known symbols and have dimension `dim - 1`.
    pub fn declare(&mut self, name: &str, dimension: u32, boundary: FormalExpression) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::InvalidParameter(format!("bad symbol name `{name}`")));
        }
        if let Some(d) = boundary.dimension(self)? {
            if d + 1 != dimension {
                return Err(Error::MixedDimensions(dimension.saturating_sub(1), d));
            }
        }
        self.declared.insert(
            name.to_string(),
            FormalSymbol {
                name: name.to_string(),
                dimension,
                boundary,
            },
        );
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<FormalSymbol> {
        if let Some(s) = self.declared.get(name) {
            return Ok(s.clone());
        }
        self.p
            .and_then(|p| builtin(p, name))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn dimension_of(&self, name: &str) -> Result<u32> {
        Ok(self.get(name)?.dimension)
    }

    pub fn monomial_dimension(&self, m: &[String]) -> Result<u32> {
        m.iter().map(|s| self.dimension_of(s)).sum()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.declared.keys().map(String::as_str)
    }
}

fn builtin(p: u64, name: &str) -> Option<FormalSymbol> {
    let num = |s: &str| -> Option<u32> {
        if s.is_empty() || (s.len() > 1 && s.starts_with('0')) {
            return None;
        }
        s.parse().ok()
    };
    let sym = |dimension: u32, boundary: FormalExpression| {
        Some(FormalSymbol {
            name: name.to_string(),
            dimension,
            boundary,
        })
    };
    if name == "pt" {
        return sym(0, FormalExpression::zero());
    }
    if let Some(inner) = name.strip_prefix("c(").and_then(|r| r.strip_suffix(')')) {
        let d = num(inner.strip_prefix('M')?)?;
        if d == 0 || d % 4 != 0 {
            return None;
        }
        return sym(d + 1, FormalExpression::term(1, &[inner]));
    }
    let (head, rest) = name.split_at(1);
    let d = num(rest)?;
    match head {
        "L" | "a" if d % 2 == 1 => sym(d, FormalExpression::zero()),
        "T" if d >= 2 && d % 2 == 0 => sym(d, FormalExpression::term(p, &[&format!("L{}", d - 1)])),
        "M" if d > 0 && d % 4 == 0 => sym(d, FormalExpression::zero()),
        _ => None,
    }
}

/// Leibniz boundary of a homogeneous expression.
pub fn formal_boundary(e: &FormalExpression, table: &SymbolTable) -> Result<FormalExpression> {
    e.dimension(table)?;
    let mut terms = Vec::new();
    for (c, m) in e.terms() {
        let mut sign_dim = 0u32;
        for (k, s) in m.iter().enumerate() {
            let sym = table.get(s)?;
            let sign = if sign_dim.is_multiple_of(2) {
                c.clone()
            } else {
                -c.clone()
            };
            for (b, inner) in sym.boundary.terms() {
                let mut f: Monomial = m[..k].to_vec();
                f.extend(inner.iter().cloned());
                f.extend(m[k + 1..].iter().cloned());
                terms.push((&sign * b, f));
            }
            sign_dim += sym.dimension;
        }
    }
    Ok(FormalExpression::new(terms))
}

/// `T{2i}xL{t-2i} + L{2i-1}xT{t-2i+1}`.
pub fn glued_expression(i: u32, total: u32) -> Result<FormalExpression> {
    if total.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("total degree {total} is even")));
    }
    if i == 0 || 2 * i > total - 1 {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= 2i <= {}, got i = {i}",
            total - 1
        )));
    }
    let t = |d: u32| format!("T{d}");
    let l = |d: u32| format!("L{d}");
    Ok(FormalExpression::term(1, &[&t(2 * i), &l(total - 2 * i)])
        .add(&FormalExpression::term(1, &[&l(2 * i - 1), &t(total - 2 * i + 1)])))
}

/// The glued representative is closed mod `p`: its boundary has all coefficients divisible by `p`.
pub fn verify_glued_cycle(p: u64, i: u32, total: u32) -> Result<Report> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("p = {p} must be at least 2")));
    }
    let table = SymbolTable::standard(p);
    let e = glued_expression(i, total)?;
    let d = formal_boundary(&e, &table)?;
    let dd = formal_boundary(&d, &table)?;
    let mut report = Report::new(format!("glued cycle p={p} i={i} total={total}"));
    report.info("expression", e.to_string());
    report.check(
        "homogeneous of the total degree",
        e.dimension(&table)? == Some(total),
        format!("dimension {total}"),
    );
    report.check(
        "boundary divisible by p",
        d.divisible_by(&BigInt::from(p)),
        format!("boundary = {d}"),
    );
    report.check("boundary cancels exactly", d.is_zero(), format!("boundary = {d}"));
    report.check("boundary of boundary vanishes", dd.is_zero(), dd.to_string());
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct ConnerFloyd {
    pub relation: FormalExpression,
    pub bounding: FormalExpression,
    pub report: Report,
}

/// Relation `p·a{2i-1} + Σ M{m}xa{2i-1-m}` and bounding chain `-Σ c(M{m})xa{2i-1-m}`
/// with the check `∂(bounding) = p·a{2i-1} - relation`.
///
/// The closed manifolds act from the left, so the cone's boundary carries no Koszul sign.
pub fn conner_floyd_expression(p: u64, i: u32, m_dims: &[u32]) -> Result<ConnerFloyd> {
    if p < 2 || i == 0 {
        return Err(Error::InvalidParameter(format!(
            "need p >= 2 and i >= 1, got p={p} i={i}"
        )));
    }
    let top = 2 * i - 1;
    let mut seen = Vec::new();
    for &m in m_dims {
        if m == 0 || m % 4 != 0 || m > 2 * i - 2 || seen.contains(&m) {
            return Err(Error::DimensionMismatch(format!(
                "manifold dimension {m} is not a distinct positive multiple of 4 at most {}",
                2 * i as i64 - 2
            )));
        }
        seen.push(m);
    }
    let table = SymbolTable::standard(p);
    let alpha = |d: u32| format!("a{d}");
    let lead = FormalExpression::term(p, &[&alpha(top)]);
    let mut relation = lead.clone();
    let mut bounding = FormalExpression::zero();
    for &m in m_dims {
        let a = alpha(top - m);
        relation = relation.add(&FormalExpression::term(1, &[&format!("M{m}"), &a]));
        bounding = bounding.add(&FormalExpression::term(-1, &[&format!("c(M{m})"), &a]));
    }

    let mut report = Report::new(format!("Conner-Floyd relation p={p} i={i}"));
    report.info("relation", format!("{relation} = 0"));
    report.info("bounding", bounding.to_string());
    report.check(
        "relation homogeneous",
        relation.dimension(&table)? == Some(top),
        format!("dimension {top}"),
    );
    let bd = bounding.dimension(&table)?;
    report.check(
        "bounding chain homogeneous",
        bd.is_none() || bd == Some(top + 1),
        format!("dimension {}", top + 1),
    );
    let d = formal_boundary(&bounding, &table)?;
    let expected = lead.sub(&relation);
    report.check(
        "boundary of bounding chain equals p*a minus the relation",
        d == expected,
        format!("boundary = {d}"),
    );
    if m_dims.is_empty() {
        report.info(
            "no manifold terms",
            format!("p*{} = 0 is asserted here, not derived", alpha(top)),
        );
    }
    Ok(ConnerFloyd {
        relation,
        bounding,
        report,
    })
}

/// Multiples of 4 in `4..=2i-2`.
pub fn admissible_m_dims(i: u32) -> Vec<u32> {
    (1..).map(|j| 4 * j).take_while(|&m| m + 2 <= 2 * i).collect()
}

/// Formal representatives of basis classes of `H_n(BZ_p × BZ_p; Z/p)`.
pub fn representability_report(p: u64, n: u32) -> Result<Report> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not an odd prime")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let table = SymbolTable::standard(p);
    let pb = BigInt::from(p);
    let mut report = Report::new(format!("representatives in H{n}(BZ{p} x BZ{p}; Z/{p})"));
    let name = |d: usize| if d == 0 { "pt".to_string() } else { format!("L{d}") };

    if n % 2 == 1 {
        let basis = kernel_basis_classes(p, n as usize)?;
        for (terms, element) in kernel_basis_terms(n as usize).into_iter().zip(&basis.elements) {
            let in_kernel = element.verified;
            if terms.len() == 1 {
                let (i, j) = terms[0];
                let e = FormalExpression::term(1, &[&name(i), &name(j)]);
                report.check(element.label(), in_kernel, format!("{e}; closed manifold product"));
            } else {
                let i = (terms[0].0 / 2) as u32;
                let e = glued_expression(i, n)?;
                let d = formal_boundary(&e, &table)?;
                report.check(
                    element.label(),
                    in_kernel && d.divisible_by(&pb),
                    format!("{e}; glued p-stratifold, boundary {d}"),
                );
            }
        }
    } else {
        for i in (1..n).step_by(2) {
            let j = n - i;
            let e = FormalExpression::term(1, &[&format!("L{i}"), &format!("L{j}")]);
            report.info(format!("a{i}xa{j}"), format!("{e}; closed manifold product"));
        }
    }
    report.info(
        "note",
        format!(
            "the class a{} in degree {} of BZ{p} is known not to come from a closed Z/{p}-manifold; \
             this is bookkeeping, nothing here proves it",
            2 * p,
            2 * p
        ),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> FormalExpression {
        s.parse().unwrap()
    }

    #[test]
    fn boundary_examples() {
        let t = SymbolTable::standard(3);
        assert_eq!(formal_boundary(&e("1*T4xL3"), &t).unwrap(), e("3*L3xL3"));
        assert_eq!(formal_boundary(&e("1*L3xT4"), &t).unwrap(), e("-3*L3xL3"));
        assert!(formal_boundary(&e("1*M4"), &t).unwrap().is_zero());
        assert!(matches!(
            formal_boundary(&e("1*M4 + 1*L3"), &t),
            Err(Error::MixedDimensions(..))
        ));
        assert!(matches!(formal_boundary(&e("1*Q2"), &t), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "3*L1xL5", "-1*c(M4)xa1 + 2*pt", "1*1", "2*a5 - 7*M4xa1"] {
            let x = e(s);
            assert_eq!(e(&x.to_string()), x, "{s}");
        }
        assert_eq!(e("2*L1 + 3*L1").to_string(), "5*L1");
        assert_eq!(e("2*L1 - 2*L1").to_string(), "0");
        for bad in ["", "L1", "2*", "x*L1", "2*L1 + --3*L1", "a*L1"] {
            assert!(bad.parse::<FormalExpression>().is_err(), "{bad}");
        }
    }

    #[test]
    fn glued_cycles() {
        for p in [3, 5] {
            for total in (3..=9).step_by(2) {
                for i in 1..=(total - 1) / 2 {
                    assert!(verify_glued_cycle(p, i, total).unwrap().passed());
                }
            }
        }
        let r = verify_glued_cycle(3, 1, 7).unwrap();
        assert!(r.rows.iter().any(|row| row.detail == "1*L1xT6 + 1*T2xL5"));
        assert!(verify_glued_cycle(3, 0, 7).is_err());
        assert!(verify_glued_cycle(3, 4, 7).is_err());
        assert!(verify_glued_cycle(3, 1, 6).is_err());
    }

    #[test]
    fn conner_floyd_example() {
        let cf = conner_floyd_expression(3, 3, &[4]).unwrap();
        assert_eq!(cf.relation, e("3*a5 + 1*M4xa1"));
        assert_eq!(cf.bounding, e("-1*c(M4)xa1"));
        let t = SymbolTable::standard(3);
        assert_eq!(formal_boundary(&cf.bounding, &t).unwrap(), e("-1*M4xa1"));
        assert!(cf.report.passed(), "{}", cf.report);
    }

    #[test]
    fn conner_floyd_ranges() {
        for i in 1..=4 {
            let cf = conner_floyd_expression(3, i, &admissible_m_dims(i)).unwrap();
            assert!(cf.report.passed());
        }
        let empty = conner_floyd_expression(3, 2, &[]).unwrap();
        assert!(empty.bounding.is_zero());
        assert!(empty.report.rows.iter().any(|r| r.label == "no manifold terms"));
        assert!(matches!(
            conner_floyd_expression(3, 3, &[6]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            conner_floyd_expression(3, 3, &[8]),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(admissible_m_dims(5), vec![4, 8]);
    }

    #[test]
    fn declared_symbols() {
        let mut t = SymbolTable::new();
        t.declare("P", 1, FormalExpression::zero()).unwrap();
        t.declare("Q", 2, e("2*P")).unwrap();
        assert!(t.declare("R", 3, e("1*P")).is_err());
        assert!(t.declare("bad name", 1, FormalExpression::zero()).is_err());
        let d = formal_boundary(&e("1*QxQ"), &t).unwrap();
        assert_eq!(d, e("2*PxQ + 2*QxP"));
        assert!(formal_boundary(&d, &t).unwrap().is_zero());
    }

    #[test]
    fn representability_tables() {
        let r = representability_report(3, 7).unwrap();
        let rows: Vec<_> = r.rows.iter().filter(|r| r.label != "note").collect();
        assert_eq!(rows.len(), 5);
        assert!(r.passed(), "{r}");
        assert!(rows[1].detail.contains("glued p-stratifold"));
        assert!(rows[0].detail.starts_with("1*ptxL7"));
        let r = representability_report(3, 4).unwrap();
        let labels: Vec<_> = r.rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["a1xa3", "a3xa1", "note"]);
        let r = representability_report(3, 1).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(representability_report(4, 3).is_err());
    }
}
