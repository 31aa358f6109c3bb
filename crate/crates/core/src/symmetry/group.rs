use std::collections::HashSet;
use std::fmt;

use serde_json::{json, Value};

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Structural class of a finite permutation group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// `C_n`; the trivial group is `Cyclic(1)`.
    Cyclic(usize),
    /// `D_n` of order `2n`; the Klein four-group is `Dihedral(2)`.
    Dihedral(usize),
    OtherAbelian,
    OtherNonabelian,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupTag::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupTag::OtherAbelian => f.write_str("other_abelian"),
            GroupTag::OtherNonabelian => f.write_str("other_nonabelian"),
        }
    }
}

/// Witnesses behind a cyclic or dihedral tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Cyclic { generator: Permutation },
    /// `r` of order `n`, `s` of order 2 outside `⟨r⟩`, `s r s = r⁻¹`.
    Dihedral { rotation: Permutation, reflection: Permutation },
    Unstructured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
    tag: GroupTag,
    presentation: Presentation,
}

impl SymmetryGroup {
    pub fn trivial(degree: usize) -> Self {
        Self::from_elements(degree, vec![Permutation::identity(degree)]).expect("trivial group")
    }

    /// Validates closure and classifies. Duplicates are dropped.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.iter().any(|p| p.degree() != degree) {
            return Err(Error::Input("permutations of mixed degree".into()));
        }
        if !elements.contains(&Permutation::identity(degree)) {
            return Err(Error::Input("group lacks the identity".into()));
        }
        let set: HashSet<&Permutation> = elements.iter().collect();
        for a in &elements {
            for b in &elements {
                if !set.contains(&a.compose(b)) {
                    return Err(Error::Input(format!("not closed: {a} · {b} missing")));
                }
            }
        }
        let (tag, presentation) = classify(&elements);
        let generators = match &presentation {
            Presentation::Cyclic { generator } if !generator.is_identity() => vec![generator.clone()],
            Presentation::Cyclic { .. } => Vec::new(),
            Presentation::Dihedral { rotation, reflection } => vec![rotation.clone(), reflection.clone()],
            Presentation::Unstructured => greedy_generators(&elements),
        };
        Ok(SymmetryGroup {
            degree,
            elements,
            generators,
            tag,
            presentation,
        })
    }

    /// Closure of `generators`, refused beyond `limit` elements.
    pub fn generate(degree: usize, generators: &[Permutation], limit: usize) -> Result<Self> {
        Self::from_elements(degree, closure(degree, generators, limit)?)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sorted; the identity comes first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        commuting(&self.elements)
    }

    /// A pair of elements that do not commute, if any.
    pub fn noncommuting_pair(&self) -> Option<(&Permutation, &Permutation)> {
        self.elements.iter().enumerate().find_map(|(i, a)| {
            self.elements[i + 1..]
                .iter()
                .find(|b| a.compose(b) != b.compose(a))
                .map(|b| (a, b))
        })
    }

    /// Conjugacy classes as index lists into [`Self::elements`].
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for i in 0..self.order() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = self
                .elements
                .iter()
                .map(|g| {
                    let c = g.compose(&self.elements[i]).compose(&g.inverse());
                    self.elements.binary_search(&c).expect("closed group")
                })
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        classes
    }

    /// Orbits of the natural action on `0..degree`.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements.iter().map(|g| g.apply(start)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &i in &orbit {
                seen[i] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn to_data(&self) -> Value {
        json!({
            "order": self.order(),
            "tag": self.tag.to_string(),
            "generators": self.generators.iter().map(|g| json!({
                "cycles": g.to_string(),
                "images": g.one_based(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn commuting(elements: &[Permutation]) -> bool {
    elements
        .iter()
        .enumerate()
        .all(|(i, a)| elements[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
}

pub(crate) fn closure(degree: usize, generators: &[Permutation], limit: usize) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                if seen.len() > limit {
                    return Err(Error::Bound(format!("group has more than {limit} elements")));
                }
                frontier.push(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn greedy_generators(elements: &[Permutation]) -> Vec<Permutation> {
    let degree = elements[0].degree();
    let mut by_order: Vec<&Permutation> = elements.iter().filter(|p| !p.is_identity()).collect();
    by_order.sort_by_key(|p| std::cmp::Reverse(p.order()));
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for p in by_order {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(p) {
            gens.push(p.clone());
            span = closure(degree, &gens, elements.len())
                .expect("subgroup of a finite group")
                .into_iter()
                .collect();
        }
    }
    gens
}

/// Cyclic if some element has order `|G|`; dihedral if `|G| = 2n` with
/// `r` of order `n` and an involution `s ∉ ⟨r⟩` such that `s r s = r⁻¹`.
pub fn classify(elements: &[Permutation]) -> (GroupTag, Presentation) {
    let n = elements.len();
    let orders: Vec<usize> = elements.iter().map(Permutation::order).collect();
    if let Some(i) = orders.iter().position(|&o| o == n) {
        return (
            GroupTag::Cyclic(n),
            Presentation::Cyclic {
                generator: elements[i].clone(),
            },
        );
    }
    if n >= 4 && n.is_multiple_of(2) {
        let half = n / 2;
        for (ri, r) in elements.iter().enumerate() {
            if orders[ri] != half {
                continue;
            }
            let powers: HashSet<Permutation> = (0..half).map(|k| r.pow(k)).collect();
            let r_inv = r.inverse();
            for (si, s) in elements.iter().enumerate() {
                if orders[si] == 2 && !powers.contains(s) && s.compose(r).compose(s) == r_inv {
                    return (
                        GroupTag::Dihedral(half),
                        Presentation::Dihedral {
                            rotation: r.clone(),
                            reflection: s.clone(),
                        },
                    );
                }
            }
        }
    }
    let tag = if commuting(elements) {
        GroupTag::OtherAbelian
    } else {
        GroupTag::OtherNonabelian
    };
    (tag, Presentation::Unstructured)
}
