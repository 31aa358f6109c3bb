//! Complement multiplets and the single-site extension that keeps every
//! latent permutation symmetry of `S`.
//!
//! `ℳ ⊆ S̄` is a multiplet when `Σ_{m∈ℳ} (H H̄ᵏ)_{s,m} = c_k` is the same for
//! every `s ∈ S`, where `H̄` is `H` with the `S`–`S̄` couplings removed.
//! Coupling a new site to multiplets changes `R_S` by `a(λ)·J`.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{scalar, Matrix, RatFunc, Scalar};
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::par::{self, Execution};
use crate::reduction::isospectral_reduce;
use crate::symmetry::{latent_permutation_group_with, SearchOptions};

/// Largest complement accepted by [`find_multiplets`].
pub const MAX_COMPLEMENT: usize = 16;

/// `H` with the blocks `H_SS̄` and `H_S̄S` set to zero.
pub fn decoupled_matrix(h: &Hamiltonian, s: &SiteSet) -> Result<Hamiltonian> {
    s.check_against(h)?;
    let m = Matrix::from_fn(h.size(), h.size(), |i, j| {
        if s.contains(i) == s.contains(j) {
            h.get(i, j).clone()
        } else {
            Scalar::zero()
        }
    });
    Hamiltonian::new(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Multiplet {
    /// Zero-based global site indices, increasing.
    pub sites: Vec<usize>,
    /// `c_k` for `k = 0 … N−1`.
    pub constants: Vec<Scalar>,
    /// No proper subset is itself a multiplet.
    pub minimal: bool,
}

impl Multiplet {
    pub fn to_data(&self) -> Value {
        json!({
            "sites": self.sites.iter().map(|s| s + 1).collect::<Vec<_>>(),
            "constants": self.constants.iter().map(scalar::format_scalar).collect::<Vec<_>>(),
            "minimal": self.minimal,
        })
    }
}

/// `(H H̄ᵏ)` restricted to rows `S` and columns `S̄`, for `k = 0 … N−1`.
fn walk_weights(h: &Hamiltonian, s: &SiteSet) -> Result<(Vec<usize>, Vec<Matrix<Scalar>>)> {
    let hbar = decoupled_matrix(h, s)?;
    let comp = s.complement();
    let mut acc = h.matrix().clone();
    let mut out = Vec::with_capacity(h.size());
    for _ in 0..h.size() {
        out.push(acc.submatrix(s.sites(), &comp));
        acc = &acc * hbar.matrix();
    }
    Ok((comp, out))
}

/// Constants `c_k` if the column positions `cols` (into the complement)
/// form a multiplet. Stops at the first mismatching `k`.
fn constants_for(weights: &[Matrix<Scalar>], cols: &[usize]) -> Option<Vec<Scalar>> {
    let mut out = Vec::with_capacity(weights.len());
    for w in weights {
        let row_sum = |r: usize| cols.iter().fold(Scalar::zero(), |acc, &c| acc + &w[(r, c)]);
        let first = row_sum(0);
        if (1..w.rows()).any(|r| row_sum(r) != first) {
            return None;
        }
        out.push(first);
    }
    Some(out)
}

fn positions_in(comp: &[usize], m: &[usize]) -> Result<Vec<usize>> {
    if m.is_empty() {
        return Err(Error::Input("multiplet candidate is empty".into()));
    }
    let mut pos = Vec::with_capacity(m.len());
    for &site in m {
        let p = comp
            .iter()
            .position(|&c| c == site)
            .ok_or_else(|| Error::Input(format!("site {} is not in the complement of S", site + 1)))?;
        if pos.contains(&p) {
            return Err(Error::Input(format!("site {} listed twice", site + 1)));
        }
        pos.push(p);
    }
    Ok(pos)
}

/// The exact `c_k` sequence if `m` (zero-based, inside `S̄`) is a multiplet.
pub fn is_multiplet(h: &Hamiltonian, s: &SiteSet, m: &[usize]) -> Result<Option<Vec<Scalar>>> {
    let (comp, weights) = walk_weights(h, s)?;
    let cols = positions_in(&comp, m)?;
    Ok(constants_for(&weights, &cols))
}

pub fn find_multiplets(h: &Hamiltonian, s: &SiteSet, max_size: usize) -> Result<Vec<Multiplet>> {
    find_multiplets_with(h, s, max_size, Execution::default())
}

/// All multiplets of size `1 … max_size` (clamped to `|S̄|`), by size then
/// lexicographically.
pub fn find_multiplets_with(h: &Hamiltonian, s: &SiteSet, max_size: usize, exec: Execution) -> Result<Vec<Multiplet>> {
    let (comp, weights) = walk_weights(h, s)?;
    if comp.len() > MAX_COMPLEMENT {
        return Err(Error::Bound(format!(
            "|S̄| = {} exceeds the subset enumeration bound {MAX_COMPLEMENT}",
            comp.len()
        )));
    }
    let max_size = max_size.min(comp.len());
    let subsets: Vec<Vec<usize>> = (1..=max_size).flat_map(|k| combinations(comp.len(), k)).collect();
    let found: Vec<(Vec<usize>, Vec<Scalar>)> = par::flat_map(exec, &subsets, |cols| {
        constants_for(&weights, cols).map(|c| (cols.clone(), c)).into_iter().collect()
    });
    let minimal: Vec<bool> = found
        .iter()
        .map(|(cols, _)| {
            !found
                .iter()
                .any(|(other, _)| other.len() < cols.len() && other.iter().all(|x| cols.contains(x)))
        })
        .collect();
    Ok(found
        .into_iter()
        .zip(minimal)
        .map(|((cols, constants), minimal)| Multiplet {
            sites: cols.iter().map(|&c| comp[c]).collect(),
            constants,
            minimal,
        })
        .collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// A new site `c` with on-site value `onsite`, coupled with `h_j` to every
/// site of `ℳ_j`. Couplings from overlapping multiplets add up.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExtensionPlan {
    pub couplings: Vec<(Vec<usize>, Scalar)>,
    pub onsite: Scalar,
}

/// Appends site `c` after checking that every `ℳ_j` is a multiplet.
pub fn extend_with_site(h: &Hamiltonian, s: &SiteSet, plan: &ExtensionPlan) -> Result<Hamiltonian> {
    for (m, _) in &plan.couplings {
        if is_multiplet(h, s, m)?.is_none() {
            let labels: Vec<String> = m.iter().map(|x| (x + 1).to_string()).collect();
            return Err(Error::Precondition(format!(
                "{{{}}} is not a complement multiplet of {s}",
                labels.join(",")
            )));
        }
    }
    extend_unchecked(h, plan)
}

/// Appends site `c` without the multiplet check (negative controls).
pub fn extend_unchecked(h: &Hamiltonian, plan: &ExtensionPlan) -> Result<Hamiltonian> {
    let n = h.size();
    let mut column = vec![Scalar::zero(); n];
    for (m, coupling) in &plan.couplings {
        for &x in m {
            if x >= n {
                return Err(Error::Input(format!("site {} out of range 1..={n}", x + 1)));
            }
            column[x] += coupling;
        }
    }
    let m = Matrix::from_fn(n + 1, n + 1, |i, j| match (i == n, j == n) {
        (false, false) => h.get(i, j).clone(),
        (true, true) => plan.onsite.clone(),
        (true, false) => column[j].clone(),
        (false, true) => column[i].clone(),
    });
    let out = Hamiltonian::new(m)?;
    match h.labels() {
        Some(labels) => {
            let mut labels = labels.to_vec();
            labels.push(format!("{}", n + 1));
            out.with_labels(labels)
        }
        None => Ok(out),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionCheck {
    /// `R_S(H′) − R_S(H)`.
    pub delta: Matrix<RatFunc>,
    /// The common entry `a(λ)` when `Δ = a(λ)·J`.
    pub a: Option<RatFunc>,
    pub group_order_before: usize,
    pub group_order_after: usize,
    /// Every latent symmetry of `S` in `H` is still one in `H′`.
    pub group_preserved: bool,
}

impl ExtensionCheck {
    pub fn passed(&self) -> bool {
        self.a.is_some() && self.group_preserved
    }

    pub fn to_data(&self) -> Value {
        json!({
            "uniform_shift": self.a.is_some(),
            "a": self.a.as_ref().map(|a| a.render_integer("λ")),
            "group_order_before": self.group_order_before,
            "group_order_after": self.group_order_after,
            "group_preserved": self.group_preserved,
            "passed": self.passed(),
        })
    }
}

/// Compares `R_S` before and after an extension. `S` keeps its indices in
/// `H′`; `H′` may have more sites than `H`.
pub fn verify_extension(h: &Hamiltonian, h2: &Hamiltonian, s: &SiteSet) -> Result<ExtensionCheck> {
    verify_extension_with(h, h2, s, &SearchOptions::default())
}

pub fn verify_extension_with(h: &Hamiltonian, h2: &Hamiltonian, s: &SiteSet, opts: &SearchOptions) -> Result<ExtensionCheck> {
    if h2.size() < h.size() {
        return Err(Error::Input("extended Hamiltonian is smaller than the original".into()));
    }
    let s2 = SiteSet::new(s.sites().to_vec(), h2.size())?;
    let before = isospectral_reduce(h, s)?;
    let after = isospectral_reduce(h2, &s2)?;
    let delta = after.entries() - before.entries();
    let first = delta[(0, 0)].clone();
    let a = delta.iter().all(|e| *e == first).then_some(first);
    let g1 = latent_permutation_group_with(h, s, opts)?;
    let g2 = latent_permutation_group_with(h2, &s2, opts)?;
    Ok(ExtensionCheck {
        delta,
        a,
        group_order_before: g1.order(),
        group_order_after: g2.order(),
        group_preserved: g1.elements().iter().all(|p| g2.contains(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    fn path3() -> Hamiltonian {
        Hamiltonian::new(Matrix::from_ints(3, 3, &[0, 1, 0, 1, 0, 1, 0, 1, 0])).unwrap()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn decoupled_chain() {
        let h = Hamiltonian::new(Matrix::from_ints(2, 2, &[3, 1, 1, 4])).unwrap();
        let s = SiteSet::from_one_based(&[1], 2).unwrap();
        assert_eq!(decoupled_matrix(&h, &s).unwrap().matrix(), &Matrix::from_ints(2, 2, &[3, 0, 0, 4]));
        assert_eq!(decoupled_matrix(&h, &SiteSet::all(2)).unwrap(), h);
    }

    #[test]
    fn path3_middle_site_is_multiplet() {
        let s = SiteSet::from_one_based(&[1, 3], 3).unwrap();
        let found = find_multiplets(&path3(), &s, 4).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].sites, vec![1]);
        assert!(found[0].minimal);
        assert_eq!(found[0].constants[0], int(1));
    }

    #[test]
    fn empty_plan_leaves_reduction() {
        let s = SiteSet::from_one_based(&[1, 3], 3).unwrap();
        let h2 = extend_with_site(&path3(), &s, &ExtensionPlan::default()).unwrap();
        let check = verify_extension(&path3(), &h2, &s).unwrap();
        assert_eq!(check.a, Some(RatFunc::zero()));
        assert!(check.passed());
    }

    #[test]
    fn rejects_site_inside_s() {
        let s = SiteSet::from_one_based(&[1, 3], 3).unwrap();
        assert!(matches!(is_multiplet(&path3(), &s, &[0]), Err(Error::Input(_))));
    }
}
