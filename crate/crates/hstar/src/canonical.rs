//! Canonical column order for a finite set of coordinate vectors.
//!
//! Two groups in (Q/Z)^n are identified when one is the other with
//! coordinates permuted. The canonical key of an element matrix is the
//! lexicographically smallest column-major reading over all column
//! permutations, where rows are kept sorted: placing one column at a time
//! refines an ordered partition of the rows, and the chosen column
//! contributes its values class by class, each class sorted.
//!
//! Every candidate segment has exactly one entry per row, so segments at
//! equal depth have equal length and the greedy rule is sound: only columns
//! achieving the minimal segment can start a minimal completion. Ties still
//! branch, so the search carries a node budget.

use crate::error::{Error, Result};

pub(crate) const DEFAULT_BUDGET: u64 = 100_000;

struct Search<'a> {
    cols: &'a [Vec<u64>],
    rep: Vec<usize>,
    budget: u64,
    nodes: u64,
    best_key: Option<Vec<u64>>,
    best_perm: Vec<usize>,
}

impl Search<'_> {
    fn segment(&self, col: usize, partition: &[Vec<usize>]) -> Vec<u64> {
        let mut seg = Vec::with_capacity(self.cols[col].len());
        for class in partition {
            let start = seg.len();
            seg.extend(class.iter().map(|&r| self.cols[col][r]));
            seg[start..].sort_unstable();
        }
        seg
    }

    fn refine(&self, col: usize, partition: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(partition.len());
        for class in partition {
            let mut sorted: Vec<usize> = class.clone();
            sorted.sort_by_key(|&r| self.cols[col][r]);
            let mut current: Vec<usize> = Vec::new();
            for r in sorted {
                if let Some(&prev) = current.last() {
                    if self.cols[col][prev] != self.cols[col][r] {
                        out.push(std::mem::take(&mut current));
                    }
                }
                current.push(r);
            }
            out.push(current);
        }
        out
    }

    fn dfs(
        &mut self,
        partition: &[Vec<usize>],
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        key: &mut Vec<u64>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CanonicalizationBudget {
                budget: self.budget,
            });
        }
        let n = self.cols.len();
        if perm.len() == n {
            if self.best_key.as_ref().is_none_or(|b| &*key < b) {
                self.best_key = Some(key.clone());
                self.best_perm = perm.clone();
            }
            return Ok(());
        }

        let mut candidates: Vec<(Vec<u64>, usize)> = Vec::new();
        for j in 0..n {
            if used[j] {
                continue;
            }
            // identical columns are interchangeable; explore the first only
            if (0..j).any(|j2| !used[j2] && self.rep[j2] == self.rep[j]) {
                continue;
            }
            candidates.push((self.segment(j, partition), j));
        }
        let min_seg = candidates.iter().map(|(s, _)| s.clone()).min().unwrap();

        for (seg, j) in candidates {
            if seg != min_seg {
                continue;
            }
            let depth = key.len();
            key.extend_from_slice(&seg);
            if let Some(best) = &self.best_key {
                if key[..] > best[..key.len()] {
                    key.truncate(depth);
                    continue;
                }
            }
            let refined = self.refine(j, partition);
            used[j] = true;
            perm.push(j);
            let r = self.dfs(&refined, used, perm, key);
            perm.pop();
            used[j] = false;
            key.truncate(depth);
            r?;
        }
        Ok(())
    }
}

/// Column permutation realizing the canonical key, and the key itself: the
/// flattened column-major reading of the canonicalized, row-sorted matrix.
/// `matrix` is indexed rows then columns; rows must share one length.
pub(crate) fn canonical_permutation(
    matrix: &[Vec<u64>],
    budget: u64,
) -> Result<(Vec<usize>, Vec<u64>)> {
    assert!(!matrix.is_empty(), "empty element matrix");
    let n = matrix[0].len();
    assert!(matrix.iter().all(|r| r.len() == n), "ragged element matrix");
    let m = matrix.len();
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|j| (0..m).map(|i| matrix[i][j]).collect())
        .collect();
    let rep: Vec<usize> = (0..n)
        .map(|j| (0..=j).find(|&j2| cols[j2] == cols[j]).unwrap())
        .collect();
    let mut search = Search {
        cols: &cols,
        rep,
        budget,
        nodes: 0,
        best_key: None,
        best_perm: Vec::new(),
    };
    let partition = vec![(0..m).collect::<Vec<usize>>()];
    search.dfs(
        &partition,
        &mut vec![false; n],
        &mut Vec::with_capacity(n),
        &mut Vec::with_capacity(n * m),
    )?;
    let key = search.best_key.expect("search visited no leaf");
    Ok((search.best_perm, key))
}
