//! Degeneracy lower bounds from a latent permutation group and their exact
//! verification against the characteristic polynomial of `H`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exact::charpoly::char_poly;
use crate::exact::{squarefree_decomposition, Matrix, Poly, Scalar, SquarefreeDecomposition};
use crate::hamiltonian::{Hamiltonian, SiteSet};
use crate::symmetry::{latent_permutation_group_with, GroupTag, Permutation, Presentation, SearchOptions, SymmetryGroup};

/// Position of an element in a cyclic or dihedral presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Word {
    /// `g^k` or `r^k`
    Rotation(usize),
    /// `s r^k`
    Reflection(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    kind: IrrepKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum IrrepKind {
    /// `χ(g^k) = ω^{jk}`
    CyclicPower(usize),
    /// `χ(r^k) = rot^k`, `χ(s r^k) = refl · rot^k` with `rot, refl ∈ {±1}`
    DihedralLinear { rot: i8, refl: i8 },
    /// `χ(r^k) = 2cos(2πjk/n)`, `χ(s r^k) = 0`
    DihedralPlane(usize),
}

/// Closed-form character table of `C_n` or `D_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepTable {
    pub tag: GroupTag,
    pub irreps: Vec<Irrep>,
}

impl IrrepTable {
    pub fn for_tag(tag: GroupTag) -> Option<Self> {
        let irreps = match tag {
            GroupTag::Cyclic(n) => (0..n)
                .map(|j| Irrep {
                    label: format!("Γ{j}"),
                    dim: 1,
                    kind: IrrepKind::CyclicPower(j),
                })
                .collect(),
            GroupTag::Dihedral(n) => {
                let linear = |label: &str, rot: i8, refl: i8| Irrep {
                    label: label.into(),
                    dim: 1,
                    kind: IrrepKind::DihedralLinear { rot, refl },
                };
                let mut v = vec![linear("A1", 1, 1), linear("A2", 1, -1)];
                if n % 2 == 0 {
                    v.push(linear("B1", -1, 1));
                    v.push(linear("B2", -1, -1));
                }
                v.extend((1..=(n - 1) / 2).map(|j| Irrep {
                    label: format!("E{j}"),
                    dim: 2,
                    kind: IrrepKind::DihedralPlane(j),
                }));
                v
            }
            _ => return None,
        };
        Some(IrrepTable { tag, irreps })
    }

    fn n(&self) -> usize {
        match self.tag {
            GroupTag::Cyclic(n) | GroupTag::Dihedral(n) => n,
            _ => unreachable!("tables exist only for cyclic and dihedral groups"),
        }
    }

    pub fn group_order(&self) -> usize {
        match self.tag {
            GroupTag::Dihedral(n) => 2 * n,
            _ => self.n(),
        }
    }

    fn character(&self, irrep: &Irrep, w: Word) -> Complex64 {
        let n = self.n();
        match (irrep.kind, w) {
            (IrrepKind::CyclicPower(j), Word::Rotation(k)) => {
                Complex64::from_polar(1.0, 2.0 * PI * ((j * k) % n) as f64 / n as f64)
            }
            (IrrepKind::DihedralLinear { rot, .. }, Word::Rotation(k)) => sign(rot, k).into(),
            (IrrepKind::DihedralLinear { rot, refl }, Word::Reflection(k)) => (refl as f64 * sign(rot, k)).into(),
            (IrrepKind::DihedralPlane(j), Word::Rotation(k)) => {
                (2.0 * (2.0 * PI * ((j * k) % n) as f64 / n as f64).cos()).into()
            }
            (IrrepKind::DihedralPlane(_), Word::Reflection(_)) => Complex64::zero(),
            (IrrepKind::CyclicPower(_), Word::Reflection(_)) => unreachable!("cyclic groups have no reflections"),
        }
    }

    fn words(&self) -> Vec<Word> {
        let n = self.n();
        let mut w: Vec<Word> = (0..n).map(Word::Rotation).collect();
        if let GroupTag::Dihedral(_) = self.tag {
            w.extend((0..n).map(Word::Reflection));
        }
        w
    }

    /// Sum of squared dimensions equals the group order and the Gram matrix
    /// of characters, rounded to integers, is exactly the identity.
    pub fn verify_orthogonality(&self) -> bool {
        let order = self.group_order();
        if self.irreps.iter().map(|r| r.dim * r.dim).sum::<usize>() != order {
            return false;
        }
        let words = self.words();
        self.irreps.iter().enumerate().all(|(a, ra)| {
            self.irreps.iter().enumerate().all(|(b, rb)| {
                let g: Complex64 = words
                    .iter()
                    .map(|&w| self.character(ra, w).conj() * self.character(rb, w))
                    .sum::<Complex64>()
                    / order as f64;
                let rounded = (g.re.round(), g.im.round());
                let close = (g.re - rounded.0).abs() < 1e-9 && (g.im - rounded.1).abs() < 1e-9;
                close && rounded == (if a == b { 1.0 } else { 0.0 }, 0.0)
            })
        })
    }
}

fn sign(rot: i8, k: usize) -> f64 {
    if rot < 0 && k % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Fixed-point count of every element, in the order of `group.elements()`.
/// Asserts constancy on conjugacy classes.
pub fn permutation_character(group: &SymmetryGroup) -> Vec<i64> {
    let chi: Vec<i64> = group.elements().iter().map(|g| g.fixed_points() as i64).collect();
    for class in group.conjugacy_classes() {
        assert!(class.iter().all(|&i| chi[i] == chi[class[0]]), "character must be a class function");
    }
    chi
}

fn words_of(group: &SymmetryGroup) -> Option<Vec<Word>> {
    let (r, s) = match group.presentation() {
        Presentation::Cyclic { generator } => (generator, None),
        Presentation::Dihedral { rotation, reflection } => (rotation, Some(reflection)),
        Presentation::Unstructured => return None,
    };
    let n = match group.tag() {
        GroupTag::Cyclic(n) | GroupTag::Dihedral(n) => n,
        _ => return None,
    };
    let powers: Vec<Permutation> = (0..n).map(|k| r.pow(k)).collect();
    group
        .elements()
        .iter()
        .map(|g| {
            if let Some(k) = powers.iter().position(|p| p == g) {
                return Some(Word::Rotation(k));
            }
            let s = s?;
            powers.iter().position(|p| s.compose(p) == *g).map(Word::Reflection)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrepMultiplicity {
    pub label: String,
    pub dim: usize,
    pub count: usize,
}

/// `a_i = (1/|G|) Σ_g χ_i(g)* χ(g)` for the permutation action on `S`.
/// `None` for groups without a shipped character table.
pub fn irrep_multiplicities(group: &SymmetryGroup) -> Option<(IrrepTable, Vec<IrrepMultiplicity>)> {
    let table = IrrepTable::for_tag(group.tag())?;
    let words = words_of(group)?;
    let chi = permutation_character(group);
    let out = table
        .irreps
        .iter()
        .map(|irrep| {
            let a: Complex64 = words
                .iter()
                .zip(&chi)
                .map(|(&w, &c)| table.character(irrep, w).conj() * c as f64)
                .sum::<Complex64>()
                / group.order() as f64;
            let count = a.re.round();
            assert!(
                (a.re - count).abs() < 1e-9 && a.im.abs() < 1e-9 && count >= 0.0,
                "multiplicity must be a non-negative integer, got {a}"
            );
            IrrepMultiplicity {
                label: irrep.label.clone(),
                dim: irrep.dim,
                count: count as usize,
            }
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(out.iter().map(|m| m.dim * m.count).sum::<usize>(), group.degree());
    Some((table, out))
}

/// "At least `count` distinct eigenvalues, each at least `multiplicity`-fold."
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyBound {
    pub multiplicity: usize,
    pub count: usize,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Predictions {
    pub tag: GroupTag,
    pub order: usize,
    pub multiplicities: Option<Vec<IrrepMultiplicity>>,
    pub bounds: Vec<DegeneracyBound>,
    pub note: String,
}

/// Bounds implied by the latent group. `real_symmetric` enables the
/// time-reversal pairing used for cyclic groups.
pub fn degeneracy_bounds(group: &SymmetryGroup, real_symmetric: bool) -> Predictions {
    let tables = irrep_multiplicities(group);
    let multiplicities = tables.as_ref().map(|(_, m)| m.clone());
    let mut bounds = Vec::new();
    let note: String = match group.tag() {
        GroupTag::Dihedral(n) => {
            for m in multiplicities.iter().flatten().filter(|m| m.dim >= 2 && m.count >= 1) {
                bounds.push(DegeneracyBound {
                    multiplicity: m.dim,
                    count: m.count,
                    source: format!("irrep {}", m.label),
                });
            }
            let has_full_orbit = group.presentation_rotation_orbit(n);
            if n >= 3 && has_full_orbit {
                bounds.push(DegeneracyBound {
                    multiplicity: 2,
                    count: (n - 1) / 2,
                    source: format!("dihedral D{n} with a rotation orbit of {n} sites"),
                });
            }
            if bounds.is_empty() {
                "all irreducible constituents are one-dimensional".into()
            } else {
                "per-irrep bounds from the dihedral character table".into()
            }
        }
        GroupTag::Cyclic(n) if n > 2 && real_symmetric => {
            // real irreps: the conjugate sectors ω^{±j} pair into 2-dim blocks
            for j in 1..=(n - 1) / 2 {
                let count = multiplicities.as_ref().map_or(0, |m| m[j].count);
                if count >= 1 {
                    bounds.push(DegeneracyBound {
                        multiplicity: 2,
                        count,
                        source: format!("real pair Γ{j} ⊕ Γ{}", n - j),
                    });
                }
            }
            "real symmetric H: conjugate cyclic sectors form two-dimensional real irreps".into()
        }
        GroupTag::Cyclic(_) => "abelian group with one-dimensional irreps; no degeneracy is forced".into(),
        GroupTag::OtherAbelian => "abelian group outside the shipped tables; no claim".into(),
        GroupTag::OtherNonabelian => {
            let (a, b) = group.noncommuting_pair().expect("nonabelian group");
            bounds.push(DegeneracyBound {
                multiplicity: 2,
                count: 1,
                source: format!("faithful action of a nonabelian group: {a} and {b} do not commute"),
            });
            "a faithful representation of a nonabelian group has a constituent of dimension ≥ 2".into()
        }
    };
    Predictions {
        tag: group.tag(),
        order: group.order(),
        multiplicities,
        bounds,
        note,
    }
}

impl SymmetryGroup {
    /// Whether the rotation of a dihedral presentation has an orbit of size
    /// `n`.
    fn presentation_rotation_orbit(&self, n: usize) -> bool {
        match self.presentation() {
            Presentation::Dihedral { rotation, .. } => rotation.cycles().iter().any(|c| c.len() == n),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundVerdict {
    pub bound: DegeneracyBound,
    /// Distinct roots of `char(H)` with at least the bound's multiplicity.
    pub observed: usize,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct DegeneracyReport {
    pub sites: SiteSet,
    pub predictions: Predictions,
    pub structure: SquarefreeDecomposition,
    pub verdicts: Vec<BoundVerdict>,
    /// Radical of `char(H)` annihilates `H`.
    pub diagonalizable: bool,
}

impl DegeneracyReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Degenerate factors of `char(H)` as `(factor, multiplicity)`.
    pub fn degenerate_factors(&self) -> Vec<(Poly, usize)> {
        self.structure
            .factors
            .iter()
            .filter(|(_, m)| *m >= 2)
            .cloned()
            .collect()
    }

    pub fn to_data(&self) -> Value {
        json!({
            "sites": self.sites.one_based(),
            "group": { "order": self.predictions.order, "tag": self.predictions.tag.to_string() },
            "irreps": self.predictions.multiplicities.as_ref().map(|ms| ms.iter().map(|m| json!({
                "label": m.label, "dim": m.dim, "multiplicity": m.count,
            })).collect::<Vec<_>>()),
            "note": self.predictions.note,
            "bounds": self.verdicts.iter().map(|v| json!({
                "multiplicity": v.bound.multiplicity,
                "count": v.bound.count,
                "source": v.bound.source,
                "observed": v.observed,
                "passed": v.passed,
            })).collect::<Vec<_>>(),
            "char_poly_factors": self.structure.factors.iter().map(|(f, m)| json!({
                "factor": f.to_string(), "degree": f.degree_or_zero(), "multiplicity": m,
            })).collect::<Vec<_>>(),
            "diagonalizable": self.diagonalizable,
            "verdict": if self.passed() { "PASS" } else { "FAIL" },
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "sites {}: latent group of order {} ({})\n",
            self.sites, self.predictions.order, self.predictions.tag
        );
        if let Some(ms) = &self.predictions.multiplicities {
            let parts: Vec<String> = ms
                .iter()
                .filter(|m| m.count > 0)
                .map(|m| format!("{}×{} (dim {})", m.count, m.label, m.dim))
                .collect();
            out += &format!("decomposition: {}\n", parts.join(" + "));
        }
        out += &format!("{}\n", self.predictions.note);
        for v in &self.verdicts {
            out += &format!(
                "bound: ≥ {} eigenvalue(s) of multiplicity ≥ {} [{}]: observed {} → {}\n",
                v.bound.count,
                v.bound.multiplicity,
                v.bound.source,
                v.observed,
                if v.passed { "PASS" } else { "FAIL" }
            );
        }
        for (f, m) in self.degenerate_factors() {
            out += &format!("degenerate factor ({f})^{m}\n");
        }
        if !self.diagonalizable {
            out += "warning: H is not diagonalizable; multiplicities are algebraic\n";
        }
        out += &format!("verdict: {}\n", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn poly_at_matrix(p: &Poly, m: &Matrix<Scalar>) -> Matrix<Scalar> {
    let n = m.rows();
    let mut acc = Matrix::<Scalar>::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * m) + &Matrix::identity(n).scaled(c);
    }
    acc
}

/// Checks predictions against the exact multiplicity structure of `char(H)`.
pub fn verify_report(h: &Hamiltonian, sites: &SiteSet, predictions: Predictions) -> DegeneracyReport {
    let structure = squarefree_decomposition(&char_poly(h.matrix()));
    let radical = structure
        .factors
        .iter()
        .fold(Poly::constant(Scalar::from_integer(1.into())), |acc, (f, _)| &acc * f);
    let diagonalizable = poly_at_matrix(&radical, h.matrix()).is_zero();
    let verdicts = predictions
        .bounds
        .iter()
        .map(|b| {
            let observed = structure.roots_with_multiplicity_at_least(b.multiplicity);
            BoundVerdict {
                bound: b.clone(),
                observed,
                passed: observed >= b.count,
            }
        })
        .collect();
    DegeneracyReport {
        sites: sites.clone(),
        predictions,
        structure,
        verdicts,
        diagonalizable,
    }
}

/// Latent group of `S`, its bounds and their verification.
pub fn degeneracy_report(h: &Hamiltonian, s: &SiteSet) -> Result<DegeneracyReport> {
    degeneracy_report_with(h, s, &SearchOptions::default())
}

pub fn degeneracy_report_with(h: &Hamiltonian, s: &SiteSet, opts: &SearchOptions) -> Result<DegeneracyReport> {
    let group = latent_permutation_group_with(h, s, opts)?;
    let predictions = degeneracy_bounds(&group, h.is_symmetric());
    Ok(verify_report(h, s, predictions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::Permutation;

    fn group(n: usize, gens: &[&[&[usize]]]) -> SymmetryGroup {
        let gens: Vec<Permutation> = gens.iter().map(|c| Permutation::from_cycles(n, c).unwrap()).collect();
        SymmetryGroup::generate(n, &gens, 1000).unwrap()
    }

    fn counts(g: &SymmetryGroup) -> Vec<(String, usize)> {
        irrep_multiplicities(g)
            .unwrap()
            .1
            .into_iter()
            .map(|m| (m.label, m.count))
            .collect()
    }

    #[test]
    fn tables_are_orthonormal() {
        for n in 1..=9 {
            assert!(IrrepTable::for_tag(GroupTag::Cyclic(n)).unwrap().verify_orthogonality());
        }
        for n in 2..=9 {
            assert!(IrrepTable::for_tag(GroupTag::Dihedral(n)).unwrap().verify_orthogonality());
        }
    }

    #[test]
    fn d3_on_three_points() {
        let g = group(3, &[&[&[0, 1, 2]], &[&[0, 1]]]);
        assert_eq!(counts(&g), vec![("A1".into(), 1), ("A2".into(), 0), ("E1".into(), 1)]);
        let p = degeneracy_bounds(&g, true);
        assert!(p.bounds.iter().all(|b| b.multiplicity == 2 && b.count == 1));
    }

    #[test]
    fn d4_on_four_points() {
        let g = group(4, &[&[&[0, 1, 2, 3]], &[&[1, 3]]]);
        let c = counts(&g);
        assert_eq!(c.iter().map(|x| x.1).sum::<usize>(), 3);
        assert_eq!(c.iter().find(|x| x.0 == "E1").unwrap().1, 1);
        assert_eq!(c.iter().find(|x| x.0 == "A1").unwrap().1, 1);
    }

    #[test]
    fn c3_regular() {
        let g = group(3, &[&[&[0, 1, 2]]]);
        assert_eq!(counts(&g).iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(degeneracy_bounds(&g, false).bounds.is_empty());
    }

    #[test]
    fn d5_corollary() {
        let g = group(5, &[&[&[0, 1, 2, 3, 4]], &[&[1, 4], &[2, 3]]]);
        let p = degeneracy_bounds(&g, true);
        assert!(p.bounds.iter().any(|b| b.count == 2 && b.multiplicity == 2));
    }

    #[test]
    fn permutation_character_values() {
        let g = group(3, &[&[&[0, 1, 2]], &[&[0, 1]]]);
        let chi = permutation_character(&g);
        for (p, c) in g.elements().iter().zip(chi) {
            let want = match p.order() {
                1 => 3,
                2 => 1,
                _ => 0,
            };
            assert_eq!(c, want);
        }
    }

    #[test]
    fn s4_bound() {
        let g = group(4, &[&[&[0, 1, 2, 3]], &[&[0, 1]]]);
        let p = degeneracy_bounds(&g, true);
        assert_eq!(p.bounds.len(), 1);
        assert!(p.multiplicities.is_none());
    }
}
