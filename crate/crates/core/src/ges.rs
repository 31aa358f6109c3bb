//! Generalized exchange symmetries: orthogonal symmetric involutions `Q`
//! with `[Q, H] = 0` and `Q|u⟩ = |v⟩` for a cospectral pair `(u, v)`.
//!
//! Cospectrality is decided exactly; `Q` itself is a floating-point
//! construction from an eigenbasis with definite parity on `(u, v)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::exact::Matrix;
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::numeric::{self, symmetric_eigen};
use crate::symmetry::{local_power_commute, walk_singlet_check, Permutation};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues closer than `cluster · max(1, ‖H‖_max)` share a cluster.
    pub cluster: f64,
    pub basis: f64,
    pub ges: f64,
    /// `‖[Q₁, Q₂]‖_max` above this counts as non-commuting.
    pub commute: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cluster: 1e-8,
            basis: 1e-8,
            ges: 1e-8,
            commute: 1e-4,
        }
    }
}

impl Tolerances {
    pub fn to_data(&self) -> Value {
        json!({ "cluster": self.cluster, "basis": self.basis, "ges": self.ges, "commute": self.commute })
    }
}

/// Sites grouped by their exact diagonal walk sequences `(Hᵏ)_uu`,
/// `k ≤ N−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CospectralPartition {
    pub classes: Vec<Vec<usize>>,
    pub walks: Vec<Vec<Scalar>>,
}

impl CospectralPartition {
    pub fn class_of(&self, site: usize) -> &[usize] {
        self.classes
            .iter()
            .find(|c| c.contains(&site))
            .expect("every site has a class")
    }

    pub fn cospectral(&self, u: usize, v: usize) -> bool {
        self.walks[u] == self.walks[v]
    }

    pub fn to_data(&self) -> Value {
        json!(self
            .classes
            .iter()
            .map(|c| c.iter().map(|s| s + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

pub fn cospectral_partition(h: &Hamiltonian) -> CospectralPartition {
    let n = h.size();
    let powers = h.powers(n);
    let walks: Vec<Vec<Scalar>> = (0..n).map(|u| powers.iter().map(|p| p[(u, u)].clone()).collect()).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        match classes.iter_mut().find(|c| walks[c[0]] == walks[u]) {
            Some(c) => c.push(u),
            None => classes.push(vec![u]),
        }
    }
    CospectralPartition { classes, walks }
}

/// One eigenvalue cluster split by parity on `(u, v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityCluster {
    pub value: f64,
    pub plus: Option<Vec<f64>>,
    pub minus: Option<Vec<f64>>,
    /// Orthonormal completion vanishing on `u` and `v`.
    pub zero: Vec<Vec<f64>>,
}

impl ParityCluster {
    fn vectors(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.plus.iter().chain(self.minus.iter()).chain(self.zero.iter())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParityBasis {
    pub u: usize,
    pub v: usize,
    pub clusters: Vec<ParityCluster>,
    /// Largest deviation from the parity conditions on `u`, `v`.
    pub parity_residual: f64,
    /// Largest `‖Hφ − ρφ‖_∞` with `ρ` the Rayleigh quotient.
    pub eigen_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn check_pair(h: &Hamiltonian, u: usize, v: usize) -> Result<()> {
    let n = h.size();
    if u >= n || v >= n {
        return Err(Error::Input(format!("site index out of range 1..={n}")));
    }
    if u == v {
        return Err(Error::Input("pair sites must differ".into()));
    }
    if !h.is_symmetric() {
        return Err(Error::Precondition("generalized exchange symmetries need a real symmetric H".into()));
    }
    if !cospectral_partition(h).cospectral(u, v) {
        return Err(Error::Precondition(format!("sites {} and {} are not cospectral", u + 1, v + 1)));
    }
    Ok(())
}

/// Eigenbasis with definite parity on `(u, v)`: per cluster, the
/// projections of `|u⟩ ± |v⟩` (normalized, `⟨u|φ⟩ > 0`) and a Gram–Schmidt
/// completion with largest-norm pivoting.
pub fn eisenberg_basis(h: &Hamiltonian, u: usize, v: usize, tol: &Tolerances) -> Result<ParityBasis> {
    check_pair(h, u, v)?;
    let n = h.size();
    let hf = h.matrix().to_f64();
    let scale = hf.max_abs().max(1.0);
    let eig = symmetric_eigen(&hf);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        match groups.last_mut() {
            Some(g) if eig.values[k] - eig.values[*g.last().expect("nonempty")] <= tol.cluster * scale => g.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let mut clusters = Vec::with_capacity(groups.len());
    let mut parity_residual = 0.0_f64;
    for g in &groups {
        let basis: Vec<Vec<f64>> = g.iter().map(|&k| eig.vector(k)).collect();
        let project = |sign: f64| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for b in &basis {
                axpy(&mut out, b[u] + sign * b[v], b);
            }
            out
        };
        let normalized = |mut p: Vec<f64>| -> Option<Vec<f64>> {
            let len = norm(&p);
            if len <= 1e-6 {
                return None;
            }
            let s = if p[u] < 0.0 { -1.0 } else { 1.0 } / len;
            p.iter_mut().for_each(|x| *x *= s);
            Some(p)
        };
        let plus = normalized(project(1.0));
        let minus = normalized(project(-1.0));

        let mut chosen: Vec<Vec<f64>> = plus.iter().chain(minus.iter()).cloned().collect();
        let mut zero = Vec::new();
        let mut candidates = basis.clone();
        while chosen.len() < basis.len() {
            for c in candidates.iter_mut() {
                for q in &chosen {
                    let d = dot(c, q);
                    axpy(c, -d, q);
                }
            }
            let (best, len) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, norm(c)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("candidates remain");
            let mut w = candidates.swap_remove(best);
            w.iter_mut().for_each(|x| *x /= len);
            chosen.push(w.clone());
            zero.push(w);
        }

        if let Some(p) = &plus {
            parity_residual = parity_residual.max((p[u] - p[v]).abs());
        }
        if let Some(m) = &minus {
            parity_residual = parity_residual.max((m[u] + m[v]).abs());
        }
        for z in &zero {
            parity_residual = parity_residual.max(z[u].abs()).max(z[v].abs());
        }
        let value = g.iter().map(|&k| eig.values[k]).sum::<f64>() / g.len() as f64;
        clusters.push(ParityCluster { value, plus, minus, zero });
    }

    if parity_residual > tol.basis {
        return Err(Error::Numerical {
            what: "parity basis".into(),
            residual: parity_residual,
            tolerance: tol.basis,
        });
    }
    let mut eigen_residual = 0.0_f64;
    for c in &clusters {
        for phi in c.vectors() {
            let hphi: Vec<f64> = (0..n).map(|i| dot(hf.row(i), phi)).collect();
            let rho = dot(phi, &hphi);
            let r = hphi.iter().zip(phi).fold(0.0_f64, |m, (a, b)| m.max((a - rho * b).abs()));
            eigen_residual = eigen_residual.max(r);
        }
    }
    if eigen_residual > tol.basis * scale {
        return Err(Error::Numerical {
            what: "eigenvector".into(),
            residual: eigen_residual,
            tolerance: tol.basis * scale,
        });
    }
    Ok(ParityBasis {
        u,
        v,
        clusters,
        parity_residual,
        eigen_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GesResiduals {
    /// `‖Q² − I‖_max`
    pub involution: f64,
    /// `‖Qᵀ − Q‖_max`
    pub symmetry: f64,
    /// `‖QH − HQ‖_max`
    pub commutator: f64,
    /// `‖Q|u⟩ − |v⟩‖_∞`
    pub exchange: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GesMatrix {
    pub u: usize,
    pub v: usize,
    pub q: Matrix<f64>,
    pub residuals: GesResiduals,
    /// `Q` is a signed permutation matrix (entries 0, ±1 within tolerance).
    pub signed_permutation: Option<Vec<(usize, f64)>>,
}

impl GesMatrix {
    /// The plain permutation when `Q` is one without sign flips.
    pub fn as_permutation(&self) -> Option<Permutation> {
        let sp = self.signed_permutation.as_ref()?;
        if sp.iter().any(|&(_, s)| s < 0.0) {
            return None;
        }
        // column c has its 1 in row sp[c].0
        Permutation::from_images(sp.iter().map(|&(r, _)| r).collect()).ok()
    }

    pub fn render_text(&self, digits: usize) -> String {
        let n = self.q.rows();
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let x = self.q[(i, j)];
                    let x = if x.abs() < 0.5 * 10f64.powi(-(digits as i32)) { 0.0 } else { x };
                    format!("{x:>w$.digits$}", w = digits + 4)
                })
                .collect();
            out += &row.join(" ");
            out.push('\n');
        }
        out
    }

    pub fn to_data(&self, digits: usize) -> Value {
        let n = self.q.rows();
        let rows: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| format!("{:.digits$}", self.q[(i, j)])).collect())
            .collect();
        json!({
            "pair": [self.u + 1, self.v + 1],
            "q": rows,
            "residuals": {
                "involution": self.residuals.involution,
                "symmetry": self.residuals.symmetry,
                "commutator": self.residuals.commutator,
                "exchange": self.residuals.exchange,
            },
            "ordinary_permutation": self.as_permutation().map(|p| p.to_string()),
            "signed_permutation": self.signed_permutation.is_some(),
        })
    }
}

fn matmul(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    let n = a.rows();
    Matrix::from_fn(n, b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

/// `Q = P₊ + P₀ − P₋` from the parity basis of `(u, v)`.
pub fn build_ges(h: &Hamiltonian, u: usize, v: usize, tol: &Tolerances) -> Result<GesMatrix> {
    let basis = eisenberg_basis(h, u, v, tol)?;
    let n = h.size();
    let mut q = Matrix::<f64>::zeros(n, n);
    for c in &basis.clusters {
        let mut add = |phi: &[f64], sign: f64| {
            for i in 0..n {
                for j in 0..n {
                    q[(i, j)] += sign * phi[i] * phi[j];
                }
            }
        };
        if let Some(p) = &c.plus {
            add(p, 1.0);
        }
        for z in &c.zero {
            add(z, 1.0);
        }
        if let Some(m) = &c.minus {
            add(m, -1.0);
        }
    }
    let hf = h.matrix().to_f64();
    let scale = hf.max_abs().max(1.0);
    let residuals = GesResiduals {
        involution: numeric::max_abs_diff(&matmul(&q, &q), &Matrix::identity(n)),
        symmetry: numeric::max_abs_diff(&q, &q.transpose()),
        commutator: numeric::max_abs_diff(&matmul(&q, &hf), &matmul(&hf, &q)),
        exchange: (0..n).fold(0.0_f64, |m, i| m.max((q[(i, u)] - (i == v) as u8 as f64).abs())),
    };
    for (what, r, t) in [
        ("Q² − I", residuals.involution, tol.ges),
        ("Qᵀ − Q", residuals.symmetry, tol.ges),
        ("[Q, H]", residuals.commutator, tol.ges * scale),
        ("Q|u⟩ − |v⟩", residuals.exchange, tol.ges),
    ] {
        if r > t {
            return Err(Error::Numerical {
                what: what.into(),
                residual: r,
                tolerance: t,
            });
        }
    }
    let signed_permutation = (0..n)
        .map(|c| {
            let hits: Vec<usize> = (0..n).filter(|&r| q[(r, c)].abs() > tol.ges).collect();
            match hits[..] {
                [r] if (q[(r, c)].abs() - 1.0).abs() <= tol.ges => Some((r, q[(r, c)].signum())),
                _ => None,
            }
        })
        .collect::<Option<Vec<_>>>();
    Ok(GesMatrix {
        u,
        v,
        q,
        residuals,
        signed_permutation,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GesPair {
    /// `Q^{(s₁,s₃)}`
    pub outer: GesMatrix,
    /// `Q^{(s₁,s₂)}`
    pub adjacent: GesMatrix,
    pub commutator_norm: f64,
    /// `(Q^{(s₁,s₃)})_{s₂,s₂}`
    pub singlet_diagonal: f64,
}

/// Two non-commuting GESs for a site set `S = (s₁, s₂, …)` whose cyclic
/// shift is a latent symmetry and where `s₂` is a walk-singlet for
/// `(s₁, s₃)`.
pub fn noncommuting_ges_pair(h: &Hamiltonian, s: &SiteSet, tol: &Tolerances) -> Result<GesPair> {
    s.check_against(h)?;
    let n = s.len();
    if n <= 2 {
        return Err(Error::Precondition(format!("needs a latent dihedral group D_n with n > 2, got |S| = {n}")));
    }
    let shift = Matrix::from_fn(n, n, |r, c| Scalar::from_integer(((c + 1) % n == r).into()));
    if !local_power_commute(h, s, &shift)? {
        return Err(Error::Precondition(format!(
            "the cyclic shift of {s} is not a latent symmetry; list S in cyclic order"
        )));
    }
    let (s1, s2, s3) = (s.sites()[0], s.sites()[1], s.sites()[2]);
    if !walk_singlet_check(h, (s1, s3), s2)? {
        return Err(Error::Precondition(format!(
            "site {} is not a walk-singlet for ({}, {})",
            s2 + 1,
            s1 + 1,
            s3 + 1
        )));
    }
    let outer = build_ges(h, s1, s3, tol)?;
    let adjacent = build_ges(h, s1, s2, tol)?;
    let commutator_norm = numeric::max_abs_diff(&matmul(&outer.q, &adjacent.q), &matmul(&adjacent.q, &outer.q));
    let singlet_diagonal = outer.q[(s2, s2)];
    if (singlet_diagonal - 1.0).abs() > tol.ges {
        return Err(Error::Numerical {
            what: "walk-singlet diagonal of Q".into(),
            residual: (singlet_diagonal - 1.0).abs(),
            tolerance: tol.ges,
        });
    }
    if commutator_norm <= tol.commute {
        return Err(Error::Precondition(format!(
            "the two exchange symmetries commute (‖[Q, Q′]‖ = {commutator_norm:e})"
        )));
    }
    Ok(GesPair {
        outer,
        adjacent,
        commutator_norm,
        singlet_diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> Hamiltonian {
        Hamiltonian::new(Matrix::from_ints(2, 2, &[0, 1, 1, 0])).unwrap()
    }

    fn path(n: usize) -> Hamiltonian {
        Hamiltonian::new(Matrix::from_fn(n, n, |i, j| Scalar::from_integer(((i.abs_diff(j) == 1) as i64).into())))
            .unwrap()
    }

    #[test]
    fn chain_parity_vectors() {
        let b = eisenberg_basis(&chain2(), 0, 1, &Tolerances::default()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(b.clusters.len(), 2);
        let minus = b.clusters[0].minus.as_ref().unwrap();
        assert!((b.clusters[0].value + 1.0).abs() < 1e-12);
        assert!((minus[0] - r).abs() < 1e-12 && (minus[1] + r).abs() < 1e-12);
        let plus = b.clusters[1].plus.as_ref().unwrap();
        assert!((plus[0] - r).abs() < 1e-12 && (plus[1] - r).abs() < 1e-12);
    }

    #[test]
    fn path_mirror() {
        let q = build_ges(&path(3), 0, 2, &Tolerances::default()).unwrap();
        assert_eq!(q.as_permutation().unwrap().to_string(), "(1 3)");
        assert_eq!(
            cospectral_partition(&path(4)).classes,
            vec![vec![0, 3], vec![1, 2]]
        );
    }

    #[test]
    fn refuses_non_cospectral() {
        let err = build_ges(&path(3), 0, 1, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn pair_needs_three_sites() {
        let s = SiteSet::from_one_based(&[1, 2], 2).unwrap();
        assert!(matches!(
            noncommuting_ges_pair(&chain2(), &s, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }
}
