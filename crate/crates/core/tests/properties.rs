use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use latsym::degeneracy::{degeneracy_report, irrep_multiplicities};
use latsym::exact::scalar::int;
use latsym::fixtures::{self, asymmetric_latent_d3, random_site_set, random_symmetric, ring};
use latsym::ges::{build_ges, cospectral_partition, Tolerances};
use latsym::graphdoc::{self, GraphDocument};
use latsym::multiplets::{extend_with_site, find_multiplets, verify_extension, ExtensionPlan};
use latsym::reduction::{isospectral_reduce, reduce_via_charpoly, schur_determinant_identity};
use latsym::symmetry::{
    global_automorphisms, latent_permutation_group, local_power_commute, symbolic_commute, Permutation,
};
use latsym::{Error, Hamiltonian, Matrix, Scalar, SiteSet};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn instance(seed: u64, max_n: usize) -> (Hamiltonian, SiteSet) {
    let mut rng = fixtures::rng(seed);
    let n = rng.random_range(2..=max_n);
    let h = random_symmetric(&mut rng, n, 0.6);
    let s = random_site_set(&mut rng, n);
    (h, s)
}

fn block_diag(a: &Matrix<Scalar>, b: &Matrix<Scalar>) -> Matrix<Scalar> {
    let (n, m) = (a.rows(), b.rows());
    Matrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)].clone(),
        (false, false) => b[(i - n, j - n)].clone(),
        _ => Scalar::zero(),
    })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn schur_identity_and_two_reduction_paths(seed in any::<u64>()) {
        let (h, s) = instance(seed, 7);
        prop_assert!(schur_determinant_identity(&h, &s).unwrap());
        let r = isospectral_reduce(&h, &s).unwrap();
        prop_assert_eq!(&r, &reduce_via_charpoly(&h, &s).unwrap());
        prop_assert!(r.entries_proper() || r.poles().is_constant());
        prop_assert!(r.denominators_divide_poles());
    }

    // (Hᵏ)_SS = (Hᵏ⁻¹)_SS H_SS + Σ_m (Hᵐ)_SS H_SS̄ H̄ᵏ⁻²⁻ᵐ H_S̄S
    #[test]
    fn walk_decomposition(seed in any::<u64>()) {
        let (h, s) = instance(seed, 7);
        let (si, ci) = (s.sites().to_vec(), s.complement());
        let n = h.size();
        let powers = h.powers(n + 1);
        let hss = h.block(&si, &si);
        let hsc = h.block(&si, &ci);
        let hcs = h.block(&ci, &si);
        let hbar = h.block(&ci, &ci);
        let bar_powers = hbar.powers(n);
        for k in 2..=n {
            let mut rhs = &powers[k - 1].submatrix(&si, &si) * &hss;
            for m in 0..=k - 2 {
                let term = &(&(&powers[m].submatrix(&si, &si) * &hsc) * &bar_powers[k - 2 - m]) * &hcs;
                rhs = &rhs + &term;
            }
            prop_assert_eq!(powers[k].submatrix(&si, &si), rhs);
        }
    }

    #[test]
    fn relabelling_commutes_with_reduction(seed in any::<u64>()) {
        let (h, s) = instance(seed, 6);
        let mut rng = fixtures::rng(seed ^ 0x5eed);
        let p = fixtures::random_permutation_matrix(&mut rng, h.size());
        let image = |i: usize| (0..h.size()).find(|&r| p[(r, i)].is_one()).unwrap();
        let ph = Hamiltonian::new(&(&p * h.matrix()) * &p.transpose()).unwrap();
        let ps = SiteSet::new(s.sites().iter().map(|&i| image(i)).collect(), h.size()).unwrap();
        let a = isospectral_reduce(&h, &s).unwrap();
        let b = isospectral_reduce(&ph, &ps).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn disjoint_block_does_not_change_reduction(seed in any::<u64>()) {
        let (h, s) = instance(seed, 5);
        let mut rng = fixtures::rng(seed.rotate_left(17));
        let m = rng.random_range(1..=3);
        let extra = random_symmetric(&mut rng, m, 0.7);
        let big = Hamiltonian::new(block_diag(h.matrix(), extra.matrix())).unwrap();
        let bs = SiteSet::new(s.sites().to_vec(), big.size()).unwrap();
        let small = isospectral_reduce(&h, &s).unwrap();
        let large = isospectral_reduce(&big, &bs).unwrap();
        prop_assert_eq!(large.entries(), small.entries());
    }

    #[test]
    fn power_commutation_matches_symbolic(seed in any::<u64>()) {
        let (h, s) = instance(seed, 6);
        let mut rng = fixtures::rng(seed ^ 0xabc);
        let m = fixtures::random_permutation_matrix(&mut rng, s.len());
        let r = isospectral_reduce(&h, &s).unwrap();
        prop_assert_eq!(local_power_commute(&h, &s, &m).unwrap(), symbolic_commute(&r, &m).unwrap());
    }

    #[test]
    fn cospectral_partition_matches_brute_force(seed in any::<u64>()) {
        let (h, _) = instance(seed, 7);
        let part = cospectral_partition(&h);
        let n = h.size();
        for u in 0..n {
            for v in 0..n {
                let brute = (0..n).all(|k| h.matrix().pow(k)[(u, u)] == h.matrix().pow(k)[(v, v)]);
                prop_assert_eq!(part.cospectral(u, v), brute);
                prop_assert_eq!(part.class_of(u).contains(&v), brute);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn latent_group_is_closed_and_commutes(seed in any::<u64>(), h1 in 1i64..4, h2 in 1i64..4, v2 in -3i64..4) {
        let mut rng = fixtures::rng(seed);
        let h = if rng.random_bool(0.5) {
            fixtures::triangle_ints(h1, h2, 3, 0, v2).unwrap()
        } else {
            random_symmetric(&mut rng, 6, 0.5)
        };
        let s = if seed % 2 == 0 { SiteSet::new(vec![0, 1, 2], 6).unwrap() } else { random_site_set(&mut rng, 6) };
        let group = latent_permutation_group(&h, &s).unwrap();
        let r = isospectral_reduce(&h, &s).unwrap();
        for a in group.elements() {
            prop_assert!(symbolic_commute(&r, &a.matrix()).unwrap());
            for b in group.elements() {
                prop_assert!(group.contains(&a.compose(b)));
            }
        }
        if let Some((_, mults)) = irrep_multiplicities(&group) {
            prop_assert_eq!(mults.iter().map(|m| m.count * m.dim).sum::<usize>(), s.len());
        }
    }

    #[test]
    fn ges_follows_relabelling(seed in any::<u64>()) {
        let mut rng = fixtures::rng(seed);
        let h = fixtures::triangle_ints(rng.random_range(1..4), rng.random_range(1..4), 3, 0, rng.random_range(-2..5)).unwrap();
        let tol = Tolerances::default();
        let q = build_ges(&h, 0, 1, &tol).unwrap();
        let p = fixtures::random_permutation_matrix(&mut rng, 6);
        let image = |i: usize| (0..6).find(|&r| p[(r, i)].is_one()).unwrap();
        let ph = Hamiltonian::new(&(&p * h.matrix()) * &p.transpose()).unwrap();
        let pq = build_ges(&ph, image(0), image(1), &tol).unwrap();
        let pf = p.to_f64();
        let expected = &(&pf * &q.q) * &pf.transpose();
        let diff = expected.iter().zip(pq.q.iter()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(diff < 1e-8, "diff {diff}");
    }

    #[test]
    fn multiplet_extension_shifts_by_multiple_of_j(seed in any::<u64>(), c in 1i64..4, onsite in -2i64..3) {
        let mut rng = fixtures::rng(seed);
        let h = fixtures::triangle_ints(rng.random_range(1..4), rng.random_range(1..4), 3, 0, rng.random_range(-2..5)).unwrap();
        let s = SiteSet::new(vec![0, 1, 2], 6).unwrap();
        let found = find_multiplets(&h, &s, 3).unwrap();
        prop_assume!(!found.is_empty());
        let pick = &found[rng.random_range(0..found.len())];
        let plan = ExtensionPlan { couplings: vec![(pick.sites.clone(), int(c))], onsite: int(onsite) };
        let h2 = extend_with_site(&h, &s, &plan).unwrap();
        let check = verify_extension(&h, &h2, &s).unwrap();
        prop_assert!(check.passed());
    }

    #[test]
    fn graph_document_round_trip(seed in any::<u64>(), big in any::<bool>()) {
        let mut rng = fixtures::rng(seed);
        let n = rng.random_range(1..=6);
        let hermitian = rng.random_bool(0.5);
        let mut m = Matrix::<Scalar>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if hermitian && j < i {
                    m[(i, j)] = m[(j, i)].clone();
                    continue;
                }
                m[(i, j)] = if big && rng.random_bool(0.3) {
                    let num = BigInt::from(rng.random::<u128>()) * BigInt::from(rng.random::<u128>());
                    let den = BigInt::from(rng.random::<u128>() | 1);
                    let sign = if rng.random_bool(0.5) { -1 } else { 1 };
                    Scalar::new(num * sign, den)
                } else {
                    fixtures::random_scalar(&mut rng)
                };
            }
        }
        let doc = GraphDocument::new(Hamiltonian::new(m).unwrap()).with_meta("seed", &seed.to_string());
        let back = graphdoc::parse(&graphdoc::render(&doc)).unwrap();
        prop_assert_eq!(back, doc);
    }
}

#[test]
fn ring_automorphisms_are_dihedral() {
    for n in 3..=9 {
        let g = global_automorphisms(&ring(n).unwrap()).unwrap();
        assert_eq!(g.order(), 2 * n, "ring {n}");
    }
}

#[test]
fn latent_d3_degeneracy_end_to_end() {
    for seed in 0..20 {
        let (h, s) = asymmetric_latent_d3(seed, 2).unwrap();
        assert_eq!(global_automorphisms(&h).unwrap().order(), 1);
        let report = degeneracy_report(&h, &s).unwrap();
        assert_eq!(report.predictions.order, 6);
        assert!(report.passed(), "seed {seed}: {}", report.render_text());
    }
}

#[test]
fn non_multiplet_extension_is_refused() {
    let h = fixtures::triangle_ints(1, 2, 3, 0, 5).unwrap();
    let s = SiteSet::new(vec![0, 1, 2], 6).unwrap();
    let plan = ExtensionPlan { couplings: vec![(vec![3], int(1))], onsite: int(0) };
    assert!(matches!(extend_with_site(&h, &s, &plan), Err(Error::Precondition(_))));
}

#[test]
fn permutation_group_laws() {
    let a = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
    let b = Permutation::from_cycles(5, &[&[3, 4]]).unwrap();
    assert_eq!(a.compose(&b), b.compose(&a));
    assert_eq!(a.pow(3), Permutation::identity(5));
    assert_eq!(a.compose(&a.inverse()), Permutation::identity(5));
    assert_eq!(&a.matrix() * &b.matrix(), a.compose(&b).matrix());
}
