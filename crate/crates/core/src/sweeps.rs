//! Seeded randomized cross-checks of exact identities. Instance `i` of a
//! sweep depends only on `(seed, i)`, so sequential and parallel runs
//! produce identical outcomes.

use rand::Rng;

use crate::error::Result;
use crate::exact::Scalar;
use crate::fixtures::{self, random_nonzero, random_permutation_matrix, random_site_set, random_symmetric};
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::multiplets::{extend_unchecked, extend_with_site, find_multiplets_with, is_multiplet, verify_extension, ExtensionPlan};
use crate::par::{self, Execution};
use crate::reduction::{isospectral_reduce, nonlinear_spectrum, reduce_via_charpoly};
use crate::symmetry::{latent_permutation_group, local_power_commute, symbolic_commute};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepOutcome {
    pub instances: usize,
    /// Instances where the checked property held in the non-trivial direction
    /// (e.g. commuting cases, multiplet extensions).
    pub positives: usize,
    /// Descriptions of failing instances.
    pub failures: Vec<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn collect(results: Vec<Result<(bool, bool)>>, label: &str) -> Self {
        let mut out = SweepOutcome {
            instances: results.len(),
            ..Default::default()
        };
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok((true, positive)) => out.positives += positive as usize,
                Ok((false, _)) => out.failures.push(format!("{label} instance {i}")),
                Err(e) => out.failures.push(format!("{label} instance {i}: {e}")),
            }
        }
        out
    }
}

fn instance_rng(seed: u64, i: usize) -> impl Rng {
    fixtures::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64))
}

/// Schur determinant identity, agreement of the two reduction paths and
/// properness of every entry, for random `H` with `2 ≤ N ≤ max_n`.
pub fn schur_sweep(seed: u64, count: usize, max_n: usize, exec: Execution) -> SweepOutcome {
    let idx: Vec<usize> = (0..count).collect();
    let results = par::map(exec, &idx, |&i| {
        let mut rng = instance_rng(seed, i);
        let n = rng.random_range(2..=max_n);
        let h = random_symmetric(&mut rng, n, 0.5);
        let s = random_site_set(&mut rng, n);
        let r = isospectral_reduce(&h, &s)?;
        let ns = nonlinear_spectrum(&r, &h)?;
        let same = r == reduce_via_charpoly(&h, &s)?;
        let ok = ns.schur_identity && ns.divides_char_h && same && r.entries_proper() && r.denominators_divide_poles();
        Ok((ok, ns.coincides_with_spectrum))
    });
    SweepOutcome::collect(results, "schur")
}

/// `[R_S(H), M] = 0` over rational functions agrees with
/// `[(Hᵏ)_SS, M] = 0` for `k ≤ N−1`. A quarter of the instances each use a
/// latent symmetry of the triangle fixture, a random permutation, a random
/// integer matrix and an element of the searched latent group.
pub fn power_commutation_sweep(seed: u64, count: usize, max_n: usize, exec: Execution) -> SweepOutcome {
    let idx: Vec<usize> = (0..count).collect();
    let results = par::map(exec, &idx, |&i| {
        let mut rng = instance_rng(seed, i);
        let (h, s, m) = match i % 4 {
            0 => {
                let p: Vec<Scalar> = (0..3).map(|_| random_nonzero(&mut rng)).collect();
                let v1 = fixtures::random_scalar(&mut rng);
                let v2 = fixtures::random_scalar(&mut rng);
                let h = fixtures::triangle(&p[0], &p[1], &p[2], &v1, &v2)?;
                let s = SiteSet::new(vec![0, 1, 2], 6)?;
                (h, s, random_permutation_matrix(&mut rng, 3))
            }
            kind => {
                let n = rng.random_range(2..=max_n);
                let h = random_symmetric(&mut rng, n, 0.5);
                let s = random_site_set(&mut rng, n);
                let k = s.len();
                let m = match kind {
                    1 => random_permutation_matrix(&mut rng, k),
                    2 => crate::exact::Matrix::from_fn(k, k, |_, _| Scalar::from_integer(rng.random_range(-2..=2).into())),
                    _ => {
                        let g = latent_permutation_group(&h, &s)?;
                        g.elements()[rng.random_range(0..g.order())].matrix()
                    }
                };
                (h, s, m)
            }
        };
        let symbolic = symbolic_commute(&isospectral_reduce(&h, &s)?, &m)?;
        let powers = local_power_commute(&h, &s, &m)?;
        Ok((symbolic == powers, symbolic))
    });
    SweepOutcome::collect(results, "commutation")
}

fn extension_base(rng: &mut impl Rng, i: usize) -> Result<(Hamiltonian, SiteSet)> {
    Ok(match i % 3 {
        0 => {
            let p: Vec<Scalar> = (0..3).map(|_| random_nonzero(rng)).collect();
            let h = fixtures::triangle(&p[0], &p[1], &p[2], &fixtures::random_scalar(rng), &fixtures::random_scalar(rng))?;
            (h, SiteSet::new(vec![0, 1, 2], 6)?)
        }
        1 => fixtures::asymmetric_latent_d3(rng.random(), 2)?,
        _ => {
            let n = rng.random_range(3..=6);
            let h = random_symmetric(rng, n, 0.6);
            let s = random_site_set(rng, n);
            (h, s)
        }
    })
}

/// Extensions through one or two random multiplets give `Δ = a(λ)·J` and
/// keep the latent group.
pub fn extension_sweep(seed: u64, count: usize, exec: Execution) -> SweepOutcome {
    let idx: Vec<usize> = (0..count).collect();
    let results = par::map(exec, &idx, |&i| {
        let mut rng = instance_rng(seed, i);
        let (h, s) = extension_base(&mut rng, i)?;
        let found = find_multiplets_with(&h, &s, 3, Execution::Sequential)?;
        if found.is_empty() {
            // nothing to couple to: only the empty plan applies
            let h2 = extend_with_site(&h, &s, &ExtensionPlan::default())?;
            return Ok((verify_extension(&h, &h2, &s)?.passed(), false));
        }
        let picks = rng.random_range(1..=2.min(found.len()));
        let couplings = (0..picks)
            .map(|_| {
                let m = &found[rng.random_range(0..found.len())];
                (m.sites.clone(), random_nonzero(&mut rng))
            })
            .collect();
        let plan = ExtensionPlan {
            couplings,
            onsite: fixtures::random_scalar(&mut rng),
        };
        let h2 = extend_with_site(&h, &s, &plan)?;
        Ok((verify_extension(&h, &h2, &s)?.passed(), true))
    });
    SweepOutcome::collect(results, "extension")
}

/// Coupling the new site to a non-multiplet must break `Δ = a(λ)·J`.
/// Returns the number of non-multiplet couplings tried and how many were
/// (wrongly) uniform.
pub fn extension_negative_controls(seed: u64, count: usize, exec: Execution) -> SweepOutcome {
    let idx: Vec<usize> = (0..count).collect();
    let results = par::map(exec, &idx, |&i| {
        let mut rng = instance_rng(seed ^ 0xA5A5, i);
        let (h, s) = extension_base(&mut rng, i % 2)?;
        let comp = s.complement();
        // a random singleton or pair of the complement that is not a multiplet
        for _ in 0..16 {
            let mut m = vec![comp[rng.random_range(0..comp.len())]];
            if rng.random_bool(0.5) {
                let x = comp[rng.random_range(0..comp.len())];
                if !m.contains(&x) {
                    m.push(x);
                }
            }
            if is_multiplet(&h, &s, &m)?.is_some() {
                continue;
            }
            let plan = ExtensionPlan {
                couplings: vec![(m, random_nonzero(&mut rng))],
                onsite: fixtures::random_scalar(&mut rng),
            };
            let h2 = extend_unchecked(&h, &plan)?;
            let check = verify_extension(&h, &h2, &s)?;
            return Ok((check.a.is_none(), true));
        }
        Ok((true, false))
    });
    SweepOutcome::collect(results, "negative control")
}
