//! Ward agglomerative clustering on z-scored feature rows.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// One merge. Cluster ids follow the usual linkage numbering: rows are
/// `0..n`, the cluster created by merge `i` is `n + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linkage {
    pub n: usize,
    pub merges: Vec<Merge>,
    /// Indices of input columns dropped for having zero variance.
    pub dropped_columns: Vec<usize>,
}

/// Column-wise z-scores (population standard deviation). Constant columns
/// are dropped and their indices returned.
pub fn zscore_columns(rows: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<usize>) {
    let n = rows.len() as f64;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut out = vec![Vec::new(); rows.len()];
    let mut dropped = Vec::new();
    for j in 0..cols {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
        let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
        if var <= 1e-24 {
            dropped.push(j);
            continue;
        }
        let sd = var.sqrt();
        for (o, r) in out.iter_mut().zip(rows) {
            o.push((r[j] - mean) / sd);
        }
    }
    (out, dropped)
}

/// Ward linkage (Lance-Williams update on squared Euclidean distances),
/// ties broken by the lowest `(a, b)` pair of active cluster ids.
pub fn ward_cluster(features: &[Vec<f64>]) -> Result<Linkage> {
    let n = features.len();
    if n < 2 {
        return Err(invalid("metrics", "clustering needs at least two rows"));
    }
    if features.iter().any(|r| r.len() != features[0].len()) {
        return Err(invalid("metrics", "ragged feature matrix"));
    }
    let (z, dropped) = zscore_columns(features);

    // d2[i][j]: squared Ward distance between active clusters.
    let total = 2 * n - 1;
    let mut d2 = vec![vec![0.0; total]; total];
    for i in 0..n {
        for j in 0..n {
            d2[i][j] = z[i].iter().zip(&z[j]).map(|(a, b)| (a - b).powi(2)).sum();
        }
    }
    let mut size = vec![0usize; total];
    size[..n].fill(1);
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for (ia, &a) in active.iter().enumerate() {
            for &b in &active[ia + 1..] {
                let (lo, hi) = (a.min(b), a.max(b));
                let d = d2[lo][hi];
                if d < best.0 - 1e-12 || ((d - best.0).abs() <= 1e-12 && (lo, hi) < (best.1, best.2)) {
                    best = (d, lo, hi);
                }
            }
        }
        let (d, a, b) = best;
        let new = n + step;
        size[new] = size[a] + size[b];
        for &w in &active {
            if w == a || w == b {
                continue;
            }
            let (sa, sb, sw) = (size[a] as f64, size[b] as f64, size[w] as f64);
            let v = ((sa + sw) * d2[a.min(w)][a.max(w)] + (sb + sw) * d2[b.min(w)][b.max(w)] - sw * d) / (sa + sb + sw);
            d2[w][new] = v;
            d2[new][w] = v;
        }
        active.retain(|&x| x != a && x != b);
        active.push(new);
        merges.push(Merge { a, b, distance: d.max(0.0).sqrt(), size: size[new] });
    }
    Ok(Linkage { n, merges, dropped_columns: dropped })
}

/// Flat cluster labels (0-based, ordered by first appearance) after undoing
/// the last `k - 1` merges.
pub fn cut_tree(link: &Linkage, k: usize) -> Vec<usize> {
    let n = link.n;
    let k = k.clamp(1, n);
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    for (i, m) in link.merges.iter().take(n - k).enumerate() {
        parent[m.a] = n + i;
        parent[m.b] = n + i;
    }
    let root = |mut x: usize| {
        while parent[x] != x {
            x = parent[x];
        }
        x
    };
    let mut seen: Vec<usize> = Vec::new();
    (0..n)
        .map(|i| {
            let r = root(i);
            match seen.iter().position(|&s| s == r) {
                Some(p) => p,
                None => {
                    seen.push(r);
                    seen.len() - 1
                }
            }
        })
        .collect()
}
