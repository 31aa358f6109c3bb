//! Hamiltonians and ordered site sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};

/// A square matrix over exact rationals, optionally with site labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    matrix: Matrix<Scalar>,
    labels: Option<Vec<String>>,
}

impl Hamiltonian {
    pub fn new(matrix: Matrix<Scalar>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Input(format!(
                "Hamiltonian must be square, got {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 {
            return Err(Error::Input("Hamiltonian has no sites".into()));
        }
        Ok(Hamiltonian {
            matrix,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::Input(format!(
                "{} labels for {} sites",
                labels.len(),
                self.size()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<Scalar> {
        self.matrix
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[(i, j)]
    }

    /// Real symmetric, i.e. Hermitian for rational entries.
    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Matrix<Scalar> {
        self.matrix.submatrix(rows, cols)
    }

    /// `(Hᵏ)` for `k = 0 … count−1`.
    pub fn powers(&self, count: usize) -> Vec<Matrix<Scalar>> {
        self.matrix.powers(count)
    }
}

/// Ordered list of distinct sites of a Hamiltonian with `universe` sites.
/// The order fixes the row/column order of reduced matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SiteSet {
    sites: Vec<usize>,
    universe: usize,
}

impl SiteSet {
    pub fn new(sites: Vec<usize>, universe: usize) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Input("site set is empty".into()));
        }
        let mut seen = vec![false; universe];
        for &s in &sites {
            if s >= universe {
                return Err(Error::Input(format!(
                    "site {} out of range 1..={universe}",
                    s + 1
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::Input(format!("site {} listed twice", s + 1)));
            }
        }
        Ok(SiteSet { sites, universe })
    }

    pub fn from_one_based(sites: &[usize], universe: usize) -> Result<Self> {
        let zero_based = sites
            .iter()
            .map(|&s| {
                s.checked_sub(1)
                    .ok_or_else(|| Error::Input("site labels start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based, universe)
    }

    pub fn all(universe: usize) -> Self {
        SiteSet {
            sites: (0..universe).collect(),
            universe,
        }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.contains(&site)
    }

    /// Remaining sites in increasing order.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.universe).filter(|s| !self.contains(*s)).collect()
    }

    pub fn check_against(&self, h: &Hamiltonian) -> Result<()> {
        if self.universe != h.size() {
            return Err(Error::Input(format!(
                "site set built for {} sites used with a {}-site Hamiltonian",
                self.universe,
                h.size()
            )));
        }
        Ok(())
    }

    /// Same sites, reordered by `order` (positions into this set).
    pub fn reordered(&self, order: &[usize]) -> SiteSet {
        SiteSet {
            sites: order.iter().map(|&i| self.sites[i]).collect(),
            universe: self.universe,
        }
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_set_validation() {
        assert!(SiteSet::from_one_based(&[1, 2], 3).is_ok());
        assert!(matches!(SiteSet::from_one_based(&[0], 3), Err(Error::Input(_))));
        assert!(matches!(SiteSet::from_one_based(&[4], 3), Err(Error::Input(_))));
        assert!(matches!(SiteSet::from_one_based(&[2, 2], 3), Err(Error::Input(_))));
        assert!(matches!(SiteSet::from_one_based(&[], 3), Err(Error::Input(_))));
    }

    #[test]
    fn complement_and_display() {
        let s = SiteSet::from_one_based(&[3, 1], 4).unwrap();
        assert_eq!(s.complement(), vec![1, 3]);
        assert_eq!(s.to_string(), "{3,1}");
    }

    #[test]
    fn non_square_rejected() {
        let m = Matrix::<Scalar>::zeros(2, 3);
        assert!(Hamiltonian::new(m).is_err());
    }
}
