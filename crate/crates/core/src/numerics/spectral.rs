//! Eigenvalue clustering and primary (generalized eigenspace) decomposition.
//!
//! [`primary_decomposition`] reorders a complex Schur form so that every
//! eigenvalue cluster occupies a contiguous diagonal block, then removes the
//! coupling between blocks by a cascade of triangular Sylvester solves.
//!
//! Clusters start from single-linkage clustering at `cluster_tol · ‖M‖_F`.
//! Roundoff splits a defective eigenvalue of index `a` into `a` values that
//! lie roughly `ε^{1/a}` apart, far outside that radius, so clusters are then
//! merged agglomeratively: each cluster gets an uncertainty radius
//! `SEPARATION_FACTOR · n · ε · ‖M‖_F · p_c`, where `p_c` bounds the norm of
//! its spectral projector, and the closest pair whose distance is within the
//! sum of their radii is merged until no such pair remains. Split pieces of
//! a Jordan block have enormous projector norms and merge; well separated
//! eigenvalues keep radii near roundoff level.

use alloc::vec;
use alloc::vec::Vec;

// Unused when std ends up linked (dev builds).
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::numerics::lu::inverse;
use crate::numerics::qr::rank_raw;
use crate::numerics::schur::{schur, Schur};
use crate::scalar::{lex_cmp, Scalar, Tolerance, ZERO};

/// Safety factor applied to first-order eigenvalue uncertainty when
/// deciding that two clusters cannot be numerically separated.
pub const SEPARATION_FACTOR: f64 = 1e3;

/// Largest accepted Frobenius condition number of the block-diagonalizing
/// similarity.
pub const TRANSFORM_CONDITION_CAP: f64 = 1e12;

/// Spectral summary of one matrix.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Cluster representatives (multiplicity-weighted means), in
    /// lexicographic `(re, im)` order.
    pub distinct_eigenvalues: Vec<Scalar>,
    pub multiplicities: Vec<usize>,
    /// Nilpotency index of the block's nilpotent part, `1 ≤ c ≤ multiplicity`.
    pub chain_bound: Vec<usize>,
    /// Nonsingular `T` with `T⁻¹ M T = blockdiag(blocks)`.
    pub transform: Mat,
    pub block_sizes: Vec<usize>,
    /// Upper triangular diagonal blocks, each with a single eigenvalue cluster.
    pub blocks: Vec<Mat>,
    /// Smallest distance between eigenvalues of different clusters, relative
    /// to `‖M‖_F`; infinite for a single cluster.
    pub margin: f64,
}

impl SpectralData {
    pub fn cluster_count(&self) -> usize {
        self.distinct_eigenvalues.len()
    }

    pub fn block_diagonal(&self) -> Mat {
        Mat::block_diag(&self.blocks)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Single-linkage labels at `radius`; returns `(labels, cluster count)` with
/// labels renumbered by lexicographic order of the cluster means.
fn single_linkage(eigs: &[Scalar], radius: f64) -> (Vec<usize>, usize) {
    let n = eigs.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= radius {
                uf.union(i, j);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    canonical_labels(eigs, &roots)
}

/// Renumbers arbitrary labels `0..count` in lexicographic order of the
/// cluster means.
fn canonical_labels(eigs: &[Scalar], raw: &[usize]) -> (Vec<usize>, usize) {
    let mut keys: Vec<usize> = raw.to_vec();
    keys.sort_unstable();
    keys.dedup();
    let means: Vec<Scalar> = keys
        .iter()
        .map(|&k| {
            let members: Vec<Scalar> = raw
                .iter()
                .zip(eigs)
                .filter(|(&l, _)| l == k)
                .map(|(_, &z)| z)
                .collect();
            members.iter().sum::<Scalar>() / members.len() as f64
        })
        .collect();
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&means[a], &means[b]));
    let mut rank = vec![0usize; keys.len()];
    for (r, &o) in order.iter().enumerate() {
        rank[o] = r;
    }
    let labels = raw
        .iter()
        .map(|l| rank[keys.binary_search(l).expect("label present")])
        .collect();
    (labels, keys.len())
}

fn cluster_summary(eigs: &[Scalar], labels: &[usize], count: usize) -> (Vec<Scalar>, Vec<usize>) {
    let mut sums = vec![ZERO; count];
    let mut mult = vec![0usize; count];
    for (&z, &l) in eigs.iter().zip(labels) {
        sums[l] += z;
        mult[l] += 1;
    }
    let reps = sums
        .iter()
        .zip(&mult)
        .map(|(&s, &m)| s / m as f64)
        .collect();
    (reps, mult)
}

/// Single-linkage clustering of an eigenvalue multiset at radius
/// `cluster_tol · norm_scale`. Representatives are cluster means, returned in
/// lexicographic order together with their multiplicities.
pub fn cluster_spectrum(
    eigs: &[Scalar],
    norm_scale: f64,
    tol: &Tolerance,
) -> (Vec<Scalar>, Vec<usize>) {
    let (labels, count) = single_linkage(eigs, tol.cluster_tol * norm_scale);
    cluster_summary(eigs, &labels, count)
}

/// Bubble-sorts the Schur diagonal so that labels are nondecreasing.
fn reorder(s: &mut Schur, labels: &mut [usize]) {
    let n = labels.len();
    loop {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            if labels[k] > labels[k + 1] {
                s.swap_adjacent(k);
                labels.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

fn block_ranges(labels: &[usize], count: usize) -> Vec<(usize, usize)> {
    let mut ranges = Vec::with_capacity(count);
    let mut start = 0;
    for c in 0..count {
        let len = labels.iter().filter(|&&l| l == c).count();
        ranges.push((start, len));
        start += len;
    }
    ranges
}

/// Solves `A X − X B = C` for upper triangular `A` (p×p) and `B` (q×q).
/// Returns `None` when the solution overflows.
fn sylvester_triangular(a: &Mat, b: &Mat, c: &Mat) -> Option<Mat> {
    let p = a.rows();
    let q = b.rows();
    let mut x = Mat::zeros(p, q);
    for col in 0..q {
        let shift = b[(col, col)];
        let mut rhs: Vec<Scalar> = (0..p).map(|i| c[(i, col)]).collect();
        for l in 0..col {
            let blc = b[(l, col)];
            for (i, r) in rhs.iter_mut().enumerate() {
                *r += x[(i, l)] * blc;
            }
        }
        for i in (0..p).rev() {
            let mut s = rhs[i];
            for l in i + 1..p {
                s -= a[(i, l)] * x[(l, col)];
            }
            let v = s / (a[(i, i)] - shift);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return None;
            }
            x[(i, col)] = v;
        }
    }
    Some(x)
}

/// Unit block upper triangular `Y` with `T Y = Y blockdiag(T_jj)`.
fn decouple(t: &Mat, ranges: &[(usize, usize)]) -> Option<Mat> {
    let n = t.rows();
    let mut y = Mat::identity(n);
    for j in 0..ranges.len() {
        let (cj, qj) = ranges[j];
        let tjj = t.submatrix(cj, cj, qj, qj);
        for i in (0..j).rev() {
            let (ci, pi) = ranges[i];
            let tii = t.submatrix(ci, ci, pi, pi);
            let mut rhs = -&t.submatrix(ci, cj, pi, qj);
            for &(cl, ql) in &ranges[i + 1..j] {
                let til = t.submatrix(ci, cl, pi, ql);
                let ylj = y.submatrix(cl, cj, ql, qj);
                rhs = &rhs - &(&til * &ylj);
            }
            let x = sylvester_triangular(&tii, &tjj, &rhs)?;
            if !x.is_finite() {
                return None;
            }
            y.set_block(ci, cj, &x);
        }
    }
    Some(y)
}

/// Upper bounds on the spectral projector norm of each block.
fn projector_norms(t: &Mat, ranges: &[(usize, usize)], tol: &Tolerance) -> Vec<f64> {
    let n = t.rows();
    let inf = vec![f64::INFINITY; ranges.len()];
    let Some(y) = decouple(t, ranges) else {
        return inf;
    };
    let Ok(yinv) = inverse(&y, tol) else {
        return inf;
    };
    ranges
        .iter()
        .map(|&(c, len)| {
            let right = y.submatrix(0, c, n, len).norm_fro();
            let left = yinv.submatrix(c, 0, len, n).norm_fro();
            let p = right * left;
            if p.is_finite() {
                p
            } else {
                f64::INFINITY
            }
        })
        .collect()
}

fn min_cross_distance(eigs: &[Scalar], labels: &[usize], a: usize, b: usize) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &li) in labels.iter().enumerate() {
        if li != a {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj == b {
                best = best.min((eigs[i] - eigs[j]).norm());
            }
        }
    }
    best
}

/// Nilpotency index of the block's strictly upper part, estimated twice:
///
/// - where the ranks of successive powers stop dropping;
/// - the first power whose norm falls below `√rank_tol · ‖M‖^c`.
///
/// Pinning the diagonal leaves noise of order the eigenvalue split, which
/// for a derogatory cluster (several Jordan blocks on one eigenvalue) can
/// fake a rank plateau one step early. An overestimate only adds redundant
/// derivative conditions to the interpolant, an underestimate breaks it, so
/// the larger of the two estimates is taken.
fn chain_bound(block: &Mat, scale: f64, tol: &Tolerance) -> usize {
    let m = block.rows();
    let mut nil = block.clone();
    for i in 0..m {
        nil[(i, i)] = ZERO;
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let negligible = tol.rank_tol.sqrt();
    let mut power = nil.clone();
    let mut by_norm = (power.norm_fro() <= negligible * scale).then_some(1);
    let mut by_rank = None;
    let mut prev = rank_raw(m, m, power.entries().to_vec(), tol.rank_tol * scale);
    for a in 1..m {
        if by_rank.is_some() && by_norm.is_some() {
            break;
        }
        power = &power * &nil;
        if by_norm.is_none() && power.norm_fro() <= negligible * scale.powi(a as i32 + 1) {
            by_norm = Some(a + 1);
        }
        if by_rank.is_none() {
            let threshold = tol.rank_tol * scale.powi(a as i32 + 1);
            let r = rank_raw(m, m, power.entries().to_vec(), threshold);
            if r == prev {
                by_rank = Some(a);
            }
            prev = r;
        }
    }
    by_rank.unwrap_or(m).max(by_norm.unwrap_or(m)).max(1)
}

/// Primary decomposition of a square matrix into single-cluster blocks.
pub fn primary_decomposition(m: &Mat, tol: &Tolerance) -> Result<SpectralData> {
    let mut s = schur(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(SpectralData {
            distinct_eigenvalues: Vec::new(),
            multiplicities: Vec::new(),
            chain_bound: Vec::new(),
            transform: Mat::zeros(0, 0),
            block_sizes: Vec::new(),
            blocks: Vec::new(),
            margin: f64::INFINITY,
        });
    }
    let scale = m.norm_fro();
    let eps = f64::EPSILON;
    let (mut labels, mut count) = single_linkage(&s.eigenvalues(), tol.cluster_tol * scale);
    loop {
        reorder(&mut s, &mut labels);
        if count == 1 {
            break;
        }
        let eigs = s.eigenvalues();
        let ranges = block_ranges(&labels, count);
        let radii: Vec<f64> = projector_norms(&s.t, &ranges, tol)
            .into_iter()
            .map(|p| SEPARATION_FACTOR * n as f64 * eps * scale * p)
            .collect();
        let mut merge: Option<(f64, usize, usize)> = None;
        for a in 0..count {
            for b in a + 1..count {
                let d = min_cross_distance(&eigs, &labels, a, b);
                if d <= radii[a] + radii[b] && merge.is_none_or(|(best, _, _)| d < best) {
                    merge = Some((d, a, b));
                }
            }
        }
        let Some((_, a, b)) = merge else {
            break;
        };
        let raw: Vec<usize> = labels.iter().map(|&l| if l == b { a } else { l }).collect();
        (labels, count) = canonical_labels(&eigs, &raw);
    }

    let eigs = s.eigenvalues();
    let ranges = block_ranges(&labels, count);
    let y = decouple(&s.t, &ranges).ok_or(Error::SingularMatrix)?;
    let transform = &s.q * &y;
    let cond = transform.norm_fro() * inverse(&transform, tol)?.norm_fro();
    if !(cond <= TRANSFORM_CONDITION_CAP) {
        return Err(Error::SingularMatrix);
    }
    let (reps, mults) = cluster_summary(&eigs, &labels, count);
    let blocks: Vec<Mat> = ranges
        .iter()
        .map(|&(c, len)| s.t.submatrix(c, c, len, len))
        .collect();
    let chain = blocks.iter().map(|b| chain_bound(b, scale, tol)).collect();
    let mut margin = f64::INFINITY;
    for a in 0..count {
        for b in a + 1..count {
            margin = margin.min(min_cross_distance(&eigs, &labels, a, b));
        }
    }
    if scale > 0.0 {
        margin /= scale;
    }
    Ok(SpectralData {
        distinct_eigenvalues: reps,
        multiplicities: mults,
        chain_bound: chain,
        transform,
        block_sizes: ranges.iter().map(|r| r.1).collect(),
        blocks,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::Rng;
    use crate::mat::distance;

    fn r(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn jordan(lambda: Scalar, a: usize) -> Mat {
        let mut j = Mat::scalar(a, lambda);
        for i in 0..a.saturating_sub(1) {
            j[(i, i + 1)] = r(1.0);
        }
        j
    }

    fn scramble(m: &Mat, seed: u64) -> Mat {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(seed);
        let x = rng.conditioned_matrix(m.rows(), 1e3, false, &tol, 64).unwrap();
        &(&x * m) * &inverse(&x, &tol).unwrap()
    }

    fn reassembly_ok(m: &Mat, sd: &SpectralData, tol: &Tolerance) {
        let tinv = inverse(&sd.transform, tol).unwrap();
        let d = &(&tinv * m) * &sd.transform;
        assert!(
            distance(&d, &sd.block_diagonal()) <= tol.residual_tol * m.norm_fro(),
            "block residual {}",
            distance(&d, &sd.block_diagonal())
        );
        let back = &(&sd.transform * &sd.block_diagonal()) * &tinv;
        assert!(distance(&back, m) <= tol.residual_tol * m.norm_fro());
    }

    #[test]
    fn clustering_examples() {
        let tol = Tolerance::default();
        let (reps, mult) = cluster_spectrum(&[r(1.0), r(1.0 + 1e-12), r(5.0)], 1.0, &tol);
        assert_eq!(mult, vec![2, 1]);
        assert!((reps[0] - 1.0).norm() < 1e-11);
        assert_eq!(reps[1], r(5.0));

        let (reps, mult) = cluster_spectrum(&[r(3.0), r(1.0), r(2.0)], 1.0, &tol);
        assert_eq!(reps, vec![r(1.0), r(2.0), r(3.0)]);
        assert_eq!(mult, vec![1, 1, 1]);

        // Chain 0 — 0.5e-7 — 1.0e-7 closes into one cluster.
        let (_, mult) = cluster_spectrum(&[r(0.0), r(0.5e-7), r(1.0e-7)], 1.0, &tol);
        assert_eq!(mult, vec![3]);
    }

    #[test]
    fn distinct_spectrum_gives_singletons() {
        let tol = Tolerance::default();
        let m = scramble(&Mat::real_diag(&[1.0, -2.0, 3.5, 0.25]), 8);
        let sd = primary_decomposition(&m, &tol).unwrap();
        assert_eq!(sd.multiplicities, vec![1; 4]);
        assert_eq!(sd.chain_bound, vec![1; 4]);
        reassembly_ok(&m, &sd, &tol);
    }

    #[test]
    fn single_jordan_block() {
        let tol = Tolerance::default();
        let sd = primary_decomposition(&jordan(r(2.0), 2), &tol).unwrap();
        assert_eq!(sd.cluster_count(), 1);
        assert_eq!(sd.multiplicities, vec![2]);
        assert_eq!(sd.chain_bound, vec![2]);
    }

    #[test]
    fn scrambled_jordan_plus_simple() {
        let tol = Tolerance::default();
        let core = Mat::block_diag(&[jordan(r(1.0), 2), Mat::real_diag(&[3.0])]);
        for seed in 0..20 {
            let m = scramble(&core, 100 + seed);
            let sd = primary_decomposition(&m, &tol).unwrap();
            assert_eq!(sd.multiplicities, vec![2, 1], "seed {seed}");
            assert_eq!(sd.chain_bound, vec![2, 1], "seed {seed}");
            assert!((sd.distinct_eigenvalues[0] - 1.0).norm() < 1e-8);
            reassembly_ok(&m, &sd, &tol);
        }
    }

    #[test]
    fn scrambled_large_jordan_blocks_merge() {
        let tol = Tolerance::default();
        for a in 3..=4 {
            let core = Mat::block_diag(&[
                jordan(Scalar::new(1.5, 0.5), a),
                Mat::diag(&[r(-2.0), Scalar::new(0.5, -1.0)]),
            ]);
            for seed in 0..20 {
                let m = scramble(&core, 1000 * a as u64 + seed);
                let sd = primary_decomposition(&m, &tol).unwrap();
                assert_eq!(sd.cluster_count(), 3, "a={a} seed={seed}");
                let j = sd
                    .multiplicities
                    .iter()
                    .position(|&k| k == a)
                    .expect("Jordan cluster");
                assert_eq!(sd.chain_bound[j], a, "a={a} seed={seed}");
            }
        }
    }

    #[test]
    fn repeated_semisimple_eigenvalue() {
        let tol = Tolerance::default();
        let m = scramble(&Mat::real_diag(&[2.0, 2.0, 2.0, -1.0]), 77);
        let sd = primary_decomposition(&m, &tol).unwrap();
        assert_eq!(sd.multiplicities, vec![1, 3]);
        assert_eq!(sd.chain_bound, vec![1, 1]);
        reassembly_ok(&m, &sd, &tol);
    }

    #[test]
    fn invariants_hold_on_random_matrices() {
        let tol = Tolerance::default();
        let mut rng = Rng::seeded(99);
        for n in 1..=10 {
            let m = rng.complex_matrix(n, n);
            let sd = primary_decomposition(&m, &tol).unwrap();
            assert_eq!(sd.multiplicities.iter().sum::<usize>(), n);
            for (c, k) in sd.chain_bound.iter().zip(&sd.multiplicities) {
                assert!(1 <= *c && c <= k);
            }
            reassembly_ok(&m, &sd, &tol);
        }
    }
}
