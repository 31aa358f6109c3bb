//! Latent permutation symmetries over a site set `S`, global automorphisms
//! and circulant structure of reductions.
//!
//! A constant matrix `M` commutes with `R_S(H, λ)` for all `λ` exactly when
//! it commutes with `(Hᵏ)_SS` for every `k`; Cayley–Hamilton makes
//! `k ≤ N−1` sufficient, so every check here is finite and exact.

mod group;
mod perm;
mod search;

pub use group::{classify, GroupTag, Presentation, SymmetryGroup};
pub use perm::Permutation;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::par::Execution;
use crate::reduction::ReducedMatrix;
use search::{preserving_permutations, Layers};

/// Bounds for the permutation searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub exec: Execution,
    /// Largest `|S|` for latent searches.
    pub max_latent_sites: usize,
    /// Largest `N` for global automorphism searches.
    pub max_global_sites: usize,
    /// Enumeration stops with a bound error past this many elements.
    pub max_group_order: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exec: Execution::default(),
            max_latent_sites: 10,
            max_global_sites: 12,
            max_group_order: 40_320,
        }
    }
}

/// `(Hᵏ)_SS` for `k = 0 … N−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkProfile {
    sites: SiteSet,
    powers: Vec<Matrix<Scalar>>,
}

impl WalkProfile {
    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    pub fn powers(&self) -> &[Matrix<Scalar>] {
        &self.powers
    }

    /// Highest power stored, `N − 1`.
    pub fn max_power(&self) -> usize {
        self.powers.len() - 1
    }

    /// `[(Hᵏ)_SS, M] = 0` for every stored `k`.
    pub fn commutes_with(&self, m: &Matrix<Scalar>) -> Result<bool> {
        check_dim(m, self.sites.len())?;
        Ok(self.powers.iter().all(|p| p.commutator(m).is_zero()))
    }
}

fn check_dim(m: &Matrix<Scalar>, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::Input(format!(
            "matrix is {}×{}, site set has {n} sites",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

pub fn walk_profile(h: &Hamiltonian, s: &SiteSet) -> Result<WalkProfile> {
    s.check_against(h)?;
    let idx = s.sites();
    let powers = h
        .powers(h.size())
        .iter()
        .map(|p| p.submatrix(idx, idx))
        .collect();
    Ok(WalkProfile {
        sites: s.clone(),
        powers,
    })
}

/// `[(Hᵏ)_SS, M] = 0` for all `0 ≤ k ≤ N−1`. `M` need not be a permutation.
pub fn local_power_commute(h: &Hamiltonian, s: &SiteSet, m: &Matrix<Scalar>) -> Result<bool> {
    check_dim(m, s.len())?;
    walk_profile(h, s)?.commutes_with(m)
}

/// Exact `[R, M] = 0` over rational functions.
pub fn symbolic_commute(r: &ReducedMatrix, m: &Matrix<Scalar>) -> Result<bool> {
    check_dim(m, r.dim())?;
    Ok(r.entries().commutator(&m.to_ratfunc()).is_zero())
}

/// Every permutation of `S` commuting with `R_S(H)`. Elements act on
/// positions within `s.sites()`, not on global site indices.
pub fn latent_permutation_group(h: &Hamiltonian, s: &SiteSet) -> Result<SymmetryGroup> {
    latent_permutation_group_with(h, s, &SearchOptions::default())
}

pub fn latent_permutation_group_with(h: &Hamiltonian, s: &SiteSet, opts: &SearchOptions) -> Result<SymmetryGroup> {
    if s.len() > opts.max_latent_sites {
        return Err(Error::Bound(format!(
            "|S| = {} exceeds the latent search bound {}",
            s.len(),
            opts.max_latent_sites
        )));
    }
    let profile = walk_profile(h, s)?;
    let layers = Layers::new(s.len(), &profile.powers[1..]);
    let elements = preserving_permutations(&layers, opts.max_group_order, opts.exec)?;
    SymmetryGroup::from_elements(s.len(), elements)
}

/// Permutations `P` of all sites with `P H Pᵀ = H`.
pub fn global_automorphisms(h: &Hamiltonian) -> Result<SymmetryGroup> {
    global_automorphisms_with(h, &SearchOptions::default())
}

pub fn global_automorphisms_with(h: &Hamiltonian, opts: &SearchOptions) -> Result<SymmetryGroup> {
    if h.size() > opts.max_global_sites {
        return Err(Error::Bound(format!(
            "N = {} exceeds the automorphism search bound {}",
            h.size(),
            opts.max_global_sites
        )));
    }
    let layers = Layers::new(h.size(), std::slice::from_ref(h.matrix()));
    let elements = preserving_permutations(&layers, opts.max_group_order, opts.exec)?;
    SymmetryGroup::from_elements(h.size(), elements)
}

/// A set of sites cycled by a global automorphism, listed in cycle order.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicOrbit {
    pub sites: SiteSet,
    pub generator: Permutation,
}

impl CyclicOrbit {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// The automorphism restricted to the orbit, as a cyclic shift of its
    /// positions.
    pub fn local_shift(&self) -> Permutation {
        let n = self.len();
        Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("cyclic shift")
    }
}

/// Orbits of size `n ≥ 3` of automorphisms of order `n`, deduplicated as
/// sets.
pub fn cyclic_orbit_sets(h: &Hamiltonian) -> Result<Vec<CyclicOrbit>> {
    cyclic_orbit_sets_in(h, &global_automorphisms(h)?)
}

pub fn cyclic_orbit_sets_in(h: &Hamiltonian, group: &SymmetryGroup) -> Result<Vec<CyclicOrbit>> {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for p in group.elements() {
        let n = p.order();
        if n < 3 {
            continue;
        }
        for cycle in p.cycles().into_iter().filter(|c| c.len() == n) {
            let mut key = cycle.clone();
            key.sort_unstable();
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let orbit = CyclicOrbit {
                sites: SiteSet::new(cycle, h.size())?,
                generator: p.clone(),
            };
            assert!(
                local_power_commute(h, &orbit.sites, &orbit.local_shift().matrix())?,
                "automorphism restricted to its orbit must commute with all walk powers"
            );
            out.push(orbit);
        }
    }
    out.sort_by_key(|o| o.sites.sites().iter().min().copied());
    Ok(out)
}

/// Whether `m[i][j]` depends only on `(j − i) mod n` and `m` is symmetric.
pub fn is_symmetric_circulant<T: PartialEq>(m: &Matrix<T>) -> bool {
    let n = m.rows();
    (0..n).all(|i| (0..n).all(|j| m[(i, j)] == m[(0, (j + n - i) % n)] && m[(i, j)] == m[(j, i)]))
}

/// Looks for a cyclic order of the sites, taken from an `n`-cycle symmetry
/// of `R` itself, in which `R` is a symmetric circulant. Returns the order
/// (position → index into `R`) and whether one was found; the identity is
/// tried first.
pub fn circulant_canonicalize(r: &ReducedMatrix) -> (Permutation, bool) {
    let n = r.dim();
    let id = Permutation::identity(n);
    if is_symmetric_circulant(r.entries()) {
        return (id, true);
    }
    let opts = SearchOptions::default();
    if n > opts.max_latent_sites {
        return (id, false);
    }
    let layers = Layers::new(n, std::slice::from_ref(r.entries()));
    let Ok(symmetries) = preserving_permutations(&layers, opts.max_group_order, Execution::Sequential) else {
        return (id, false);
    };
    for c in symmetries.iter().filter(|p| p.cycles().len() == 1 && n > 1) {
        let order: Vec<usize> = (0..n).map(|k| c.pow(k).apply(0)).collect();
        if is_symmetric_circulant(&r.entries().reordered(&order)) {
            return (Permutation::from_images(order).expect("cycle order"), true);
        }
    }
    (id, false)
}

/// `(Hᵏ)_uu = (Hᵏ)_vv` for all `k ≤ N−1`.
pub fn cospectral(h: &Hamiltonian, u: usize, v: usize) -> bool {
    h.powers(h.size()).iter().all(|p| p[(u, u)] == p[(v, v)])
}

/// `(Hᵏ)_{w,u} = (Hᵏ)_{w,v}` for all `k ≤ N−1`, for a cospectral pair.
pub fn walk_singlet_check(h: &Hamiltonian, (u, v): (usize, usize), w: usize) -> Result<bool> {
    let n = h.size();
    if u >= n || v >= n || w >= n {
        return Err(Error::Input(format!("site index out of range 1..={n}")));
    }
    let powers = h.powers(n);
    if !powers.iter().all(|p| p[(u, u)] == p[(v, v)]) {
        return Err(Error::Precondition(format!("sites {} and {} are not cospectral", u + 1, v + 1)));
    }
    Ok(powers.iter().all(|p| p[(w, u)] == p[(w, v)]))
}

/// Report fragment for a latent group over `s`, elements mapped to global
/// one-based site labels.
pub fn latent_group_data(group: &SymmetryGroup, s: &SiteSet, max_power: usize) -> Value {
    let label = |p: &Permutation| -> Vec<usize> { (0..s.len()).map(|i| s.sites()[p.apply(i)] + 1).collect() };
    json!({
        "sites": s.one_based(),
        "order": group.order(),
        "tag": group.tag().to_string(),
        "generators": group.generators().iter().map(|g| json!({
            "cycles_by_position": g.to_string(),
            "images": label(g),
        })).collect::<Vec<_>>(),
        "certificate": { "commutes_with_powers_up_to": max_power },
    })
}
