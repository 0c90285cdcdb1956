//! Exactness certificates for sequences of finitely generated abelian groups.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactalg::{divisible, map_kernel, subgroup_contains, subgroup_presentation, IntegerMatrix};
use crate::report::{Report, Status};

/// A homomorphism `⊕ Z/source[j] -> ⊕ Z/target[i]` in generator coordinates.
#[derive(Clone, Debug)]
pub struct GroupMap {
    pub label: String,
    pub matrix: IntegerMatrix,
}

/// A finite sequence `G_0 -> G_1 -> ... -> G_m` of groups given by their
/// cyclic orders (`0` for `Z`).
#[derive(Clone, Debug, Default)]
pub struct ExactSequence {
    pub labels: Vec<String>,
    pub groups: Vec<Vec<BigInt>>,
    pub maps: Vec<GroupMap>,
}

impl ExactSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts or extends the sequence. `map` goes from the previous group to this one.
    pub fn push(&mut self, label: impl Into<String>, orders: Vec<BigInt>, map: Option<GroupMap>) -> Result<()> {
        match (self.groups.last(), map) {
            (None, None) => {}
            (None, Some(_)) => return Err(Error::InvalidParameter("first group takes no incoming map".into())),
            (Some(_), None) => return Err(Error::InvalidParameter("missing map into group".into())),
            (Some(prev), Some(m)) => {
                if m.matrix.shape() != (orders.len(), prev.len()) {
                    return Err(Error::DimensionMismatch(format!(
                        "map {} is {}x{}, expected {}x{}",
                        m.label,
                        m.matrix.rows(),
                        m.matrix.cols(),
                        orders.len(),
                        prev.len()
                    )));
                }
                self.maps.push(m);
            }
        }
        self.labels.push(label.into());
        self.groups.push(orders);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// Outcome of the exactness test at one interior group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCheck {
    pub label: String,
    /// `g ∘ f` vanishes modulo the orders of the target.
    pub composite_zero: bool,
    /// Every column of `f` lies in `ker g`.
    pub image_in_kernel: bool,
    /// Every kernel generator of `g` lies in `im f`.
    pub kernel_in_image: bool,
    /// Presentations of `im f` and `ker g` agree.
    pub presentations_agree: bool,
    pub image: String,
    pub kernel: String,
}

impl NodeCheck {
    pub fn exact(&self) -> bool {
        self.composite_zero && self.image_in_kernel && self.kernel_in_image && self.presentations_agree
    }
}

/// Checks exactness at every interior group of the sequence.
pub fn check_exactness(seq: &ExactSequence) -> Vec<NodeCheck> {
    let mut out = Vec::new();
    for i in 1..seq.len().saturating_sub(1) {
        let (b, c) = (&seq.groups[i], &seq.groups[i + 1]);
        let f = &seq.maps[i - 1].matrix;
        let g = &seq.maps[i].matrix;

        let gf = g.try_mul(f).expect("shapes checked on push");
        let composite_zero = (0..gf.rows()).all(|r| gf.row(r).iter().all(|x| divisible(x, &c[r])));

        let ker = map_kernel(b, c, g);
        let image_in_kernel = f.columns().iter().all(|col| subgroup_contains(b, &ker, col));
        let kernel_in_image = ker.columns().iter().all(|col| subgroup_contains(b, f, col));
        let image = subgroup_presentation(b, f);
        let kernel = subgroup_presentation(b, &ker);
        out.push(NodeCheck {
            label: seq.labels[i].clone(),
            composite_zero,
            image_in_kernel,
            kernel_in_image,
            presentations_agree: image == kernel,
            image: image.to_string(),
            kernel: kernel.to_string(),
        });
    }
    out
}

/// Appends one row per interior node to `report`.
pub(crate) fn record_checks(report: &mut Report, prefix: &str, checks: &[NodeCheck]) {
    for c in checks {
        let detail = format!(
            "im = {}, ker = {}; composite zero: {}, im in ker: {}, ker in im: {}",
            c.image, c.kernel, c.composite_zero, c.image_in_kernel, c.kernel_in_image
        );
        report.push(format!("{prefix} at {}", c.label), Status::from_bool(c.exact()), detail);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::to_big;

    fn map(m: &[&[i64]]) -> Option<GroupMap> {
        Some(GroupMap {
            label: "m".into(),
            matrix: IntegerMatrix::from_i64(m),
        })
    }

    #[test]
    fn short_exact_z_times_two() {
        // 0 -> Z -2-> Z -> Z/2 -> 0
        let mut s = ExactSequence::new();
        s.push("0", vec![], None).unwrap();
        s.push(
            "Z",
            to_big(&[0]),
            Some(GroupMap {
                label: "0".into(),
                matrix: IntegerMatrix::zeros(1, 0),
            }),
        )
        .unwrap();
        s.push("Z", to_big(&[0]), map(&[&[2]])).unwrap();
        s.push("Z/2", to_big(&[2]), map(&[&[1]])).unwrap();
        s.push(
            "0",
            vec![],
            Some(GroupMap {
                label: "0".into(),
                matrix: IntegerMatrix::zeros(0, 1),
            }),
        )
        .unwrap();
        let checks = check_exactness(&s);
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(NodeCheck::exact), "{checks:?}");
    }

    #[test]
    fn detects_failures() {
        // Z -3-> Z -> Z/2 is not even a complex.
        let mut s = ExactSequence::new();
        s.push("Z", to_big(&[0]), None).unwrap();
        s.push("Z", to_big(&[0]), map(&[&[3]])).unwrap();
        s.push("Z/2", to_big(&[2]), map(&[&[1]])).unwrap();
        let c = &check_exactness(&s)[0];
        assert!(!c.composite_zero && !c.image_in_kernel);

        // Z -4-> Z -> Z/2 is a complex but not exact; im and ker are both Z.
        let mut s = ExactSequence::new();
        s.push("Z", to_big(&[0]), None).unwrap();
        s.push("Z", to_big(&[0]), map(&[&[4]])).unwrap();
        s.push("Z/2", to_big(&[2]), map(&[&[1]])).unwrap();
        let c = &check_exactness(&s)[0];
        assert!(c.composite_zero && c.image_in_kernel);
        assert!(c.presentations_agree && !c.kernel_in_image && !c.exact());
    }

    #[test]
    fn same_order_different_subgroups() {
        // In Z/2 ⊕ Z/2, im = <(1,0)> and ker = <(0,1)> have the same
        // presentation but differ; membership catches it.
        let mut s = ExactSequence::new();
        s.push("Z/2", to_big(&[2]), None).unwrap();
        s.push("Z/2+Z/2", to_big(&[2, 2]), map(&[&[1], &[0]])).unwrap();
        s.push("Z/2", to_big(&[2]), map(&[&[1, 0]])).unwrap();
        let c = &check_exactness(&s)[0];
        assert!(c.presentations_agree);
        assert!(!c.composite_zero && !c.exact());
    }

    #[test]
    fn push_checks_shapes() {
        let mut s = ExactSequence::new();
        s.push("Z", to_big(&[0]), None).unwrap();
        assert!(s.push("Z", to_big(&[0]), map(&[&[1, 2]])).is_err());
        assert!(s.push("Z", to_big(&[0]), None).is_err());
    }
}
