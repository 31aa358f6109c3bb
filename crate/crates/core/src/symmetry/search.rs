//! Permutations preserving a list of matrices simultaneously:
//! `L[σ(i), σ(j)] = L[i, j]` for every layer `L`. Values are interned to
//! integer ids; vertices are colored by invariants and refined before a
//! backtracking search, split on the image of the first vertex.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::perm::Permutation;
use crate::error::{Error, Result};
use crate::exact::Matrix;
use crate::par::{self, Execution};

pub(crate) struct Layers {
    n: usize,
    ids: Vec<Vec<u32>>,
}

impl Layers {
    pub(crate) fn new<T: Eq + Hash + Clone>(n: usize, layers: &[Matrix<T>]) -> Self {
        let ids = layers
            .iter()
            .map(|m| {
                assert!(m.rows() == n && m.cols() == n);
                let mut table: HashMap<&T, u32> = HashMap::new();
                m.iter()
                    .map(|v| {
                        let next = table.len() as u32;
                        *table.entry(v).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        Layers { n, ids }
    }

    fn at(&self, layer: usize, i: usize, j: usize) -> u32 {
        self.ids[layer][i * self.n + j]
    }

    fn compatible(&self, i: usize, j: usize, vi: usize, vj: usize) -> bool {
        (0..self.ids.len()).all(|l| self.at(l, i, j) == self.at(l, vi, vj) && self.at(l, j, i) == self.at(l, vj, vi))
    }

    /// Equitable-style refinement starting from diagonal values and row and
    /// column multisets.
    fn colors(&self) -> Vec<u32> {
        let n = self.n;
        let keys: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut key = Vec::new();
                for l in 0..self.ids.len() {
                    key.push(self.at(l, i, i));
                    let mut row: Vec<u32> = (0..n).map(|j| self.at(l, i, j)).collect();
                    let mut col: Vec<u32> = (0..n).map(|j| self.at(l, j, i)).collect();
                    row.sort_unstable();
                    col.sort_unstable();
                    key.extend(row);
                    key.push(u32::MAX);
                    key.extend(col);
                    key.push(u32::MAX);
                }
                key
            })
            .collect();
        let mut colors = canonical(&keys);
        loop {
            let keys: Vec<Vec<u32>> = (0..n)
                .map(|i| {
                    let mut nbrs: Vec<Vec<u32>> = (0..n)
                        .map(|j| {
                            let mut t = vec![colors[j]];
                            for l in 0..self.ids.len() {
                                t.push(self.at(l, i, j));
                                t.push(self.at(l, j, i));
                            }
                            t
                        })
                        .collect();
                    nbrs.sort_unstable();
                    let mut key = vec![colors[i]];
                    key.extend(nbrs.into_iter().flatten());
                    key
                })
                .collect();
            let refined = canonical(&keys);
            let before = count_distinct(&colors);
            let after = count_distinct(&refined);
            colors = refined;
            if after == before {
                return colors;
            }
        }
    }
}

fn canonical(keys: &[Vec<u32>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u32>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("present") as u32)
        .collect()
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// All permutations preserving every layer, refused once more than `limit`
/// have been found.
pub(crate) fn preserving_permutations(layers: &Layers, limit: usize, exec: Execution) -> Result<Vec<Permutation>> {
    let n = layers.n;
    if n == 0 {
        return Ok(vec![Permutation::identity(0)]);
    }
    let colors = layers.colors();
    // assign the most constrained vertices first
    let mut class_size: HashMap<u32, usize> = HashMap::new();
    for &c in &colors {
        *class_size.entry(c).or_default() += 1;
    }
    let mut seq: Vec<usize> = (0..n).collect();
    seq.sort_by_key(|&i| (class_size[&colors[i]], colors[i], i));

    let first = seq[0];
    let roots: Vec<usize> = (0..n).filter(|&v| colors[v] == colors[first]).collect();
    let found = AtomicUsize::new(0);
    let ctx = Ctx {
        layers,
        colors: &colors,
        seq: &seq,
        limit,
        found: &found,
    };
    let branches = par::map(exec, &roots, |&v| {
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut out = Vec::new();
        if layers.compatible(first, first, v, v) {
            image[first] = v;
            used[v] = true;
            ctx.extend(1, &mut image, &mut used, &mut out)?;
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for b in branches {
        all.extend(b?);
    }
    all.sort();
    Ok(all)
}

struct Ctx<'a> {
    layers: &'a Layers,
    colors: &'a [u32],
    seq: &'a [usize],
    limit: usize,
    found: &'a AtomicUsize,
}

impl Ctx<'_> {
    fn extend(&self, depth: usize, image: &mut [usize], used: &mut [bool], out: &mut Vec<Permutation>) -> Result<()> {
        if depth == self.seq.len() {
            if self.found.fetch_add(1, Ordering::Relaxed) >= self.limit {
                return Err(Error::Bound(format!(
                    "more than {} symmetry elements; group too large to enumerate",
                    self.limit
                )));
            }
            out.push(Permutation::from_images(image.to_vec()).expect("bijective by construction"));
            return Ok(());
        }
        if self.found.load(Ordering::Relaxed) > self.limit {
            return Err(Error::Bound(format!("more than {} symmetry elements", self.limit)));
        }
        let i = self.seq[depth];
        for v in 0..image.len() {
            if used[v] || self.colors[v] != self.colors[i] {
                continue;
            }
            let ok = self.layers.compatible(i, i, v, v)
                && self.seq[..depth]
                    .iter()
                    .all(|&j| self.layers.compatible(i, j, v, image[j]));
            if ok {
                image[i] = v;
                used[v] = true;
                self.extend(depth + 1, image, used, out)?;
                used[v] = false;
                image[i] = usize::MAX;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Matrix<i32> {
        Matrix::from_fn(n, n, |i, j| ((i + 1) % n == j || (j + 1) % n == i) as i32)
    }

    #[test]
    fn ring_has_dihedral_automorphisms() {
        for n in 3..8 {
            let l = Layers::new(n, &[ring(n)]);
            let seq = preserving_permutations(&l, 1000, Execution::Sequential).unwrap();
            let par = preserving_permutations(&l, 1000, Execution::Parallel).unwrap();
            assert_eq!(seq.len(), 2 * n);
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn empty_graph_hits_limit() {
        let l = Layers::new(7, &[Matrix::from_fn(7, 7, |_, _| 0)]);
        assert!(matches!(
            preserving_permutations(&l, 100, Execution::Sequential),
            Err(Error::Bound(_))
        ));
    }
}
