//! Example Hamiltonians and seeded random generators.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::scalar::{self, int, ratio};
use crate::exact::{Matrix, Scalar};
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::multiplets::{extend_with_site, ExtensionPlan};
use crate::symmetry::{global_automorphisms_with, SearchOptions};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symmetric_from_edges(n: usize, onsite: &[Scalar], edges: &[(usize, usize, Scalar)]) -> Matrix<Scalar> {
    let mut m = Matrix::<Scalar>::zeros(n, n);
    for (i, v) in onsite.iter().enumerate() {
        m[(i, i)] = v.clone();
    }
    for (i, j, w) in edges {
        m[(*i, *j)] += w;
        m[(*j, *i)] += w;
    }
    m
}

/// Triangle `{1,2,3}` (coupling `h₃`, on-site `v₁`) with three outer sites
/// `{4,5,6}` (on-site `v₂`) wired 1–4:h₁, 1–5:h₂, 2–5:h₁, 2–6:h₂, 3–6:h₁,
/// 3–4:h₂. `R_{1,2,3}` is circulant with diagonal `v₁ + (h₁²+h₂²)/(λ−v₂)`
/// and off-diagonal `h₁h₂/(λ−v₂) + h₃`.
pub fn triangle(h1: &Scalar, h2: &Scalar, h3: &Scalar, v1: &Scalar, v2: &Scalar) -> Result<Hamiltonian> {
    if h1.is_zero() || h2.is_zero() || h3.is_zero() {
        return Err(Error::Input("couplings h1, h2, h3 must be nonzero".into()));
    }
    let onsite = [v1, v1, v1, v2, v2, v2].map(Clone::clone);
    let edges = [
        (0, 1, h3.clone()),
        (1, 2, h3.clone()),
        (0, 2, h3.clone()),
        (0, 3, h1.clone()),
        (0, 4, h2.clone()),
        (1, 4, h1.clone()),
        (1, 5, h2.clone()),
        (2, 5, h1.clone()),
        (2, 3, h2.clone()),
    ];
    Hamiltonian::new(symmetric_from_edges(6, &onsite, &edges))
}

/// `triangle` with small integer parameters.
pub fn triangle_ints(h1: i64, h2: i64, h3: i64, v1: i64, v2: i64) -> Result<Hamiltonian> {
    triangle(&int(h1), &int(h2), &int(h3), &int(v1), &int(v2))
}

/// Cycle graph with unit couplings.
pub fn ring(n: usize) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::Input("ring needs at least 2 sites".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, int(1))).collect();
    let edges = if n == 2 { edges[..1].to_vec() } else { edges };
    Hamiltonian::new(symmetric_from_edges(n, &vec![int(0); n], &edges))
}

/// Path graph with unit couplings.
pub fn path(n: usize) -> Result<Hamiltonian> {
    if n < 2 {
        return Err(Error::Input("path needs at least 2 sites".into()));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, int(1))).collect();
    Hamiltonian::new(symmetric_from_edges(n, &vec![int(0); n], &edges))
}

/// Ring `1…n` plus one pendant per ring site, pendant `n+i` coupled to ring
/// site `i` with `a` and to site `i+1` with `b`, on-site `v`. For `a ≠ b`
/// the global symmetry is `C_n` without reflections.
pub fn decorated_ring(n: usize, a: &Scalar, b: &Scalar, v: &Scalar) -> Result<Hamiltonian> {
    if n < 3 {
        return Err(Error::Input("decorated ring needs at least 3 sites".into()));
    }
    let mut onsite = vec![int(0); n];
    onsite.extend(std::iter::repeat_n(v.clone(), n));
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, int(1))).collect();
    for i in 0..n {
        edges.push((i, n + i, a.clone()));
        edges.push(((i + 1) % n, n + i, b.clone()));
    }
    Hamiltonian::new(symmetric_from_edges(2 * n, &onsite, &edges))
}

/// Ring `S = {1…n}` with two identical pendants on every ring site.
fn twin_pendant_ring(n: usize) -> Result<Hamiltonian> {
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, int(1))).collect();
    if n == 2 {
        edges.truncate(1);
    }
    for i in 0..n {
        edges.push((i, n + 2 * i, int(1)));
        edges.push((i, n + 2 * i + 1, int(1)));
    }
    Hamiltonian::new(symmetric_from_edges(3 * n, &vec![int(0); 3 * n], &edges))
}

/// Nonzero rational `p/q` with `|p| ≤ 5`, `1 ≤ q ≤ 3`.
pub fn random_nonzero(rng: &mut impl Rng) -> Scalar {
    let p = loop {
        let p: i64 = rng.random_range(-5..=5);
        if p != 0 {
            break p;
        }
    };
    ratio(p, rng.random_range(1..=3))
}

/// Rational `p/q` with `|p| ≤ 5`, `1 ≤ q ≤ 3`, possibly zero.
pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    ratio(rng.random_range(-5..=5), rng.random_range(1..=3))
}

/// Real symmetric matrix with small integer entries; each off-diagonal pair
/// is nonzero with probability `density`.
pub fn random_symmetric(rng: &mut impl Rng, n: usize, density: f64) -> Hamiltonian {
    let mut m = Matrix::<Scalar>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = int(rng.random_range(-3..=3));
        for j in i + 1..n {
            if rng.random_bool(density) {
                let v = int(*[-2, -1, 1, 2, 3].get(rng.random_range(0..5)).expect("in range"));
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
    }
    Hamiltonian::new(m).expect("square and nonempty")
}

/// Random nonempty proper subset of `0..n` (or all of it when `n = 1`).
pub fn random_site_set(rng: &mut impl Rng, n: usize) -> SiteSet {
    if n == 1 {
        return SiteSet::all(1);
    }
    let k = rng.random_range(1..n);
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut sites = all[..k].to_vec();
    sites.sort_unstable();
    SiteSet::new(sites, n).expect("valid subset")
}

/// Random permutation matrix of size `n`.
pub fn random_permutation_matrix(rng: &mut impl Rng, n: usize) -> Matrix<Scalar> {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.random_range(0..=i));
    }
    Matrix::from_fn(n, n, |r, c| int((images[c] == r) as i64))
}

/// Constructive analogue of a latently `D_n`-symmetric graph without any
/// permutation symmetry. Starts from [`twin_pendant_ring`] and adds `steps`
/// sites, each coupled to two random transversals (one pendant of every ring
/// site; transversals are always complement multiplets) with distinct random
/// couplings and a random on-site value. Draws are repeated until the
/// automorphism group is trivial. `steps = 0` returns the bare ring;
/// `steps = 1` is refused.
pub fn asymmetric_latent_dihedral(n: usize, seed: u64, steps: usize) -> Result<(Hamiltonian, SiteSet)> {
    if n < 3 {
        return Err(Error::Input("latent dihedral construction needs n ≥ 3".into()));
    }
    if steps == 0 {
        return Ok((ring(n)?, SiteSet::new((0..n).collect(), n)?));
    }
    if steps == 1 {
        // one site only splits each twin pair two ways, so two ring sites
        // always match and their exchange stays an automorphism
        return Err(Error::Input("needs 0 or at least 2 extension steps".into()));
    }
    let mut rng = rng(seed);
    let base = twin_pendant_ring(n)?;
    for _attempt in 0..256 {
        let mut h = base.clone();
        for _ in 0..steps {
            let s = SiteSet::new((0..n).collect(), h.size())?;
            let h1 = random_nonzero(&mut rng);
            let h2 = loop {
                let x = random_nonzero(&mut rng);
                if x != h1 && x != -h1.clone() {
                    break x;
                }
            };
            let mut transversal = || -> Vec<usize> { (0..n).map(|i| n + 2 * i + rng.random_range(0..2)).collect() };
            let plan = ExtensionPlan {
                couplings: vec![(transversal(), h1), (transversal(), h2)],
                onsite: random_scalar(&mut rng),
            };
            h = extend_with_site(&h, &s, &plan)?;
        }
        let opts = SearchOptions {
            max_global_sites: h.size(),
            ..SearchOptions::default()
        };
        if global_automorphisms_with(&h, &opts)?.order() == 1 {
            let s = SiteSet::new((0..n).collect(), h.size())?;
            return Ok((h, s));
        }
    }
    Err(Error::Precondition(format!(
        "seed {seed}: no asymmetric draw with {steps} extension steps"
    )))
}

/// [`asymmetric_latent_dihedral`] with `n = 3`.
pub fn asymmetric_latent_d3(seed: u64, steps: usize) -> Result<(Hamiltonian, SiteSet)> {
    asymmetric_latent_dihedral(3, seed, steps)
}

/// Named fixtures for the CLI: `triangle[:h1,h2,h3,v1,v2]`, `ring:n`, `path:n`,
/// `decorated-ring:n`, `latent-d3:seed[,steps]`, `latent-dn:n,seed[,steps]`.
pub fn by_name(spec: &str) -> Result<Hamiltonian> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let nums: Vec<&str> = args.split(',').filter(|a| !a.is_empty()).collect();
    let count = |i: usize, default: usize| -> Result<usize> {
        nums.get(i)
            .map(|a| a.trim().parse::<usize>().map_err(|_| Error::Input(format!("bad count {a:?}"))))
            .unwrap_or(Ok(default))
    };
    match name {
        "triangle" => {
            let p: Vec<Scalar> = if nums.is_empty() {
                vec![int(1), int(2), int(3), int(0), int(5)]
            } else {
                nums.iter().map(|a| scalar::parse_scalar(a)).collect::<Result<_>>()?
            };
            if p.len() != 5 {
                return Err(Error::Input("triangle takes h1,h2,h3,v1,v2".into()));
            }
            triangle(&p[0], &p[1], &p[2], &p[3], &p[4])
        }
        "ring" => ring(count(0, 6)?),
        "path" => path(count(0, 3)?),
        "decorated-ring" => decorated_ring(count(0, 4)?, &int(1), &int(2), &int(3)),
        "latent-d3" => Ok(asymmetric_latent_d3(count(0, 0)? as u64, count(1, 2)?)?.0),
        "latent-dn" => Ok(asymmetric_latent_dihedral(count(0, 5)?, count(1, 0)? as u64, count(2, 2)?)?.0),
        _ => Err(Error::Input(format!("unknown fixture {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::global_automorphisms;

    #[test]
    fn triangle_refuses_zero_coupling() {
        assert!(triangle_ints(0, 2, 3, 0, 5).is_err());
        assert!(triangle_ints(1, 2, 3, 0, 5).unwrap().is_symmetric());
    }

    #[test]
    fn ring3_is_triangle() {
        assert_eq!(ring(3).unwrap().matrix(), &Matrix::from_ints(3, 3, &[0, 1, 1, 1, 0, 1, 1, 1, 0]));
    }

    #[test]
    fn decorated_ring_is_chiral() {
        let g = global_automorphisms(&decorated_ring(4, &int(1), &int(2), &int(3)).unwrap()).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn named_fixtures() {
        assert_eq!(by_name("ring:4").unwrap().size(), 4);
        assert_eq!(by_name("triangle").unwrap().size(), 6);
        assert!(by_name("triangle:1,2").is_err());
        assert!(by_name("nope").is_err());
    }
}
