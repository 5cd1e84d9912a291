//! Pooling matrices: the finite-field line construction and a checker for
//! the multipool conditions (constant row sums, constant column sums, and
//! pairwise column overlap at most one).

mod format;

pub use format::{read_dense_csv, read_matrix_file, write_dense_csv, write_matrix_json, FORMAT_VERSION};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, PrimePower};

/// Parameters of an `(n, q, m)`-multipool with `n = q²` items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultipoolParams {
    q: u32,
    m: u32,
}

impl MultipoolParams {
    pub fn new(q: u32, m: u32) -> Result<Self> {
        if !crate::gf::is_supported_order(q) {
            return Err(Error::UnsupportedField(q as u64));
        }
        if m == 0 {
            return Err(Error::domain("multiplicity must be at least 1"));
        }
        if m > q + 1 {
            return Err(Error::DesignBound { q, m, max: q + 1 });
        }
        Ok(Self { q, m })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of items, `q²`.
    pub fn n(&self) -> usize {
        (self.q * self.q) as usize
    }

    /// Number of pools, `m·q`.
    pub fn t(&self) -> usize {
        (self.m * self.q) as usize
    }

    /// Items per test, `n / t = q / m`.
    pub fn compression_ratio(&self) -> f64 {
        self.q as f64 / self.m as f64
    }
}

/// Slope of a line in `F_q²`. `Infinity` marks the vertical lines `x = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(FieldElem),
    Infinity,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(a) => write!(f, "{a}"),
            Slope::Infinity => f.write_str("inf"),
        }
    }
}

/// The line a pool was built from: `y = slope·x + intercept`, or
/// `x = intercept` for the infinite slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PoolLabel {
    pub slope: Slope,
    pub intercept: FieldElem,
}

/// Binary `t × n` incidence structure, stored both by pool and by item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolingMatrix {
    n: usize,
    pools: Vec<Vec<usize>>,
    membership: Vec<Vec<usize>>,
    labels: Option<Vec<PoolLabel>>,
    q: Option<u32>,
    m: Option<u32>,
}

impl PoolingMatrix {
    /// Builds a matrix from pool contents. Nominal `q` and `m` are inferred
    /// when all pools (resp. all items) have the same size.
    pub fn from_pools(n: usize, pools: Vec<Vec<usize>>) -> Result<Self> {
        let mut membership = vec![Vec::new(); n];
        for (i, pool) in pools.iter().enumerate() {
            for &j in pool {
                if j >= n {
                    return Err(Error::domain(format!(
                        "pool {i} references item {j}, but there are only {n} items"
                    )));
                }
                if membership[j].last() == Some(&i) {
                    return Err(Error::domain(format!("pool {i} lists item {j} twice")));
                }
                membership[j].push(i);
            }
        }
        let mut matrix = Self {
            n,
            pools,
            membership,
            labels: None,
            q: None,
            m: None,
        };
        matrix.q = matrix.uniform_pool_size().map(|s| s as u32);
        matrix.m = matrix.uniform_multiplicity().map(|s| s as u32);
        Ok(matrix)
    }

    pub(crate) fn with_labels(mut self, labels: Vec<PoolLabel>) -> Result<Self> {
        if labels.len() != self.pools.len() {
            return Err(Error::domain(format!(
                "{} labels given for {} pools",
                labels.len(),
                self.pools.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub(crate) fn with_nominal(mut self, q: Option<u32>, m: Option<u32>) -> Self {
        self.q = q.or(self.q);
        self.m = m.or(self.m);
        self
    }

    /// Number of items (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pools (rows).
    pub fn t(&self) -> usize {
        self.pools.len()
    }

    pub fn pools(&self) -> &[Vec<usize>] {
        &self.pools
    }

    pub fn pool(&self, i: usize) -> &[usize] {
        &self.pools[i]
    }

    /// Pools containing item `j`, in increasing pool order.
    pub fn item_pools(&self, j: usize) -> &[usize] {
        &self.membership[j]
    }

    pub fn labels(&self) -> Option<&[PoolLabel]> {
        self.labels.as_deref()
    }

    /// Nominal pool size.
    pub fn q(&self) -> Option<u32> {
        self.q
    }

    /// Nominal multiplicity.
    pub fn m(&self) -> Option<u32> {
        self.m
    }

    pub fn uniform_pool_size(&self) -> Option<usize> {
        let first = self.pools.first()?.len();
        self.pools.iter().all(|p| p.len() == first).then_some(first)
    }

    pub fn uniform_multiplicity(&self) -> Option<usize> {
        let first = self.membership.first()?.len();
        self.membership.iter().all(|p| p.len() == first).then_some(first)
    }

    /// Largest column sum.
    pub fn max_multiplicity(&self) -> usize {
        self.membership.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn entry(&self, pool: usize, item: usize) -> bool {
        self.membership[item].binary_search(&pool).is_ok()
    }

    /// Membership lists recomputed from the pool lists.
    pub fn membership_from_pools(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, pool) in self.pools.iter().enumerate() {
            for &j in pool {
                out[j].push(i);
            }
        }
        out
    }

    /// Pool lists recomputed from the membership lists, each sorted.
    pub fn pools_from_membership(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.pools.len()];
        for (j, pools) in self.membership.iter().enumerate() {
            for &i in pools {
                out[i].push(j);
            }
        }
        out
    }
}

/// Item index of the point `(x, y)` in `F_q²`.
pub fn item_index(q: u32, x: FieldElem, y: FieldElem) -> usize {
    (q * x.index() + y.index()) as usize
}

/// Builds the multipool whose pools are the lines of `F_q²`.
///
/// Items are the points `(x, y)`, numbered `q·x + y`. For `m ≤ q` the pools
/// are the lines `y = a·x + b` with slopes `a` taken as the first `m` field
/// elements in index order; for `m = q + 1` all `q` slopes are used and the
/// vertical lines `x = c` form a last layer. Pool `layer·q + b` is the line
/// with intercept `b` in that layer, and each pool lists its items in
/// increasing order.
pub fn build_multipool(params: MultipoolParams) -> Result<PoolingMatrix> {
    let q = params.q;
    let field = Field::new(PrimePower::from_order(q)?)?;
    let finite_layers = params.m.min(q);
    let mut pools = Vec::with_capacity(params.t());
    let mut labels = Vec::with_capacity(params.t());
    for slope in field.elements().take(finite_layers as usize) {
        for intercept in field.elements() {
            let mut pool = field
                .elements()
                .map(|x| {
                    let y = field.add(field.mul(slope, x)?, intercept)?;
                    Ok(item_index(q, x, y))
                })
                .collect::<Result<Vec<_>>>()?;
            pool.sort_unstable();
            pools.push(pool);
            labels.push(PoolLabel {
                slope: Slope::Finite(slope),
                intercept,
            });
        }
    }
    if params.m == q + 1 {
        for c in field.elements() {
            pools.push(field.elements().map(|y| item_index(q, c, y)).collect());
            labels.push(PoolLabel {
                slope: Slope::Infinity,
                intercept: c,
            });
        }
    }
    Ok(PoolingMatrix::from_pools(params.n(), pools)?
        .with_labels(labels)?
        .with_nominal(Some(q), Some(params.m)))
}

/// Upper bound `⌊n(n−1) / (q(q−1))⌋` on the number of pools of size `q`
/// over `n` items such that two pools share at most one item.
pub fn max_pools_bound(q: u64, n: u64) -> Result<u64> {
    if q < 2 || n < q {
        return Err(Error::domain("pool-count bound needs q >= 2 and n >= q"));
    }
    Ok(n * (n - 1) / (q * (q - 1)))
}

/// One failed multipool condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RowSum {
        pool: usize,
        sum: usize,
        expected: usize,
    },
    ColumnSum {
        item: usize,
        sum: usize,
        expected: usize,
    },
    Overlap {
        first: usize,
        second: usize,
        shared: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowSum { pool, sum, expected } => {
                write!(f, "row sum: pool {pool} has {sum} items, expected {expected}")
            }
            Violation::ColumnSum { item, sum, expected } => {
                write!(
                    f,
                    "column sum: item {item} is in {sum} pools, expected {expected}"
                )
            }
            Violation::Overlap {
                first,
                second,
                shared,
            } => {
                write!(f, "overlap: items {first} and {second} share {shared} pools")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub is_multipool: bool,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub max_pairwise_overlap: usize,
    pub violations: Vec<Violation>,
}

/// Checks a matrix against the multipool conditions for pool size `q` and
/// multiplicity `m`, listing every violation.
pub fn validate_multipool(matrix: &PoolingMatrix, q: usize, m: usize) -> ValidationReport {
    let row_sums: Vec<usize> = matrix.pools.iter().map(Vec::len).collect();
    let col_sums: Vec<usize> = matrix.membership.iter().map(Vec::len).collect();
    let mut violations = Vec::new();
    for (pool, &sum) in row_sums.iter().enumerate() {
        if sum != q {
            violations.push(Violation::RowSum {
                pool,
                sum,
                expected: q,
            });
        }
    }
    for (item, &sum) in col_sums.iter().enumerate() {
        if sum != m {
            violations.push(Violation::ColumnSum {
                item,
                sum,
                expected: m,
            });
        }
    }

    // Scalar products of column j with every later column, via the pools
    // containing j.
    let mut max_overlap = 0;
    let mut shared = vec![0usize; matrix.n];
    let mut touched = Vec::new();
    for j in 0..matrix.n {
        for &i in &matrix.membership[j] {
            for &k in &matrix.pools[i] {
                if k > j {
                    if shared[k] == 0 {
                        touched.push(k);
                    }
                    shared[k] += 1;
                }
            }
        }
        touched.sort_unstable();
        for &k in &touched {
            max_overlap = max_overlap.max(shared[k]);
            if shared[k] > 1 {
                violations.push(Violation::Overlap {
                    first: j,
                    second: k,
                    shared: shared[k],
                });
            }
            shared[k] = 0;
        }
        touched.clear();
    }

    ValidationReport {
        is_multipool: violations.is_empty(),
        row_sums,
        col_sums,
        max_pairwise_overlap: max_overlap,
        violations,
    }
}

/// The Fano plane as a `(7, 3, 3)`-multipool (items numbered from 0).
pub fn fano_plane() -> PoolingMatrix {
    let lines = [
        [1, 2, 3],
        [1, 4, 5],
        [1, 6, 7],
        [2, 4, 6],
        [2, 5, 7],
        [3, 4, 7],
        [3, 5, 6],
    ];
    let pools = lines.iter().map(|l| l.iter().map(|&i| i - 1).collect()).collect();
    PoolingMatrix::from_pools(7, pools).expect("fano plane is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(q: u32, m: u32) -> PoolingMatrix {
        build_multipool(MultipoolParams::new(q, m).unwrap()).unwrap()
    }

    #[test]
    fn q2_m2_pools_by_hand() {
        // Points (x, y) -> 2x + y: (0,0)=0, (0,1)=1, (1,0)=2, (1,1)=3.
        let mat = build(2, 2);
        assert_eq!(mat.pools(), &[vec![0, 2], vec![1, 3], vec![0, 3], vec![1, 2]]);
        let labels = mat.labels().unwrap();
        assert_eq!(labels[2].slope, Slope::Finite(FieldElem::ONE));
        assert_eq!(labels[3].intercept, FieldElem::ONE);
    }

    #[test]
    fn q7_m8_is_maximal() {
        let mat = build(7, 8);
        assert_eq!(mat.n(), 49);
        assert_eq!(mat.t(), 56);
        let report = validate_multipool(&mat, 7, 8);
        assert!(report.is_multipool);
        assert_eq!(report.max_pairwise_overlap, 1);
        assert_eq!(mat.labels().unwrap().last().unwrap().slope, Slope::Infinity);
        // In the maximal design every pair of items shares exactly one pool.
        for j in 0..49 {
            for k in j + 1..49 {
                let a = mat.item_pools(j);
                let shared = mat.item_pools(k).iter().filter(|i| a.contains(i)).count();
                assert_eq!(shared, 1);
            }
        }
    }

    #[test]
    fn q8_m9_validates() {
        assert!(validate_multipool(&build(8, 9), 8, 9).is_multipool);
    }

    #[test]
    fn multiplicity_beyond_bound_is_rejected() {
        assert_eq!(
            MultipoolParams::new(7, 9),
            Err(Error::DesignBound { q: 7, m: 9, max: 8 })
        );
        assert!(matches!(
            MultipoolParams::new(6, 2),
            Err(Error::UnsupportedField(6))
        ));
        assert!(matches!(MultipoolParams::new(7, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn pool_count_bound() {
        assert_eq!(max_pools_bound(7, 49).unwrap(), 56);
        assert_eq!(max_pools_bound(2, 4).unwrap(), 6);
        assert_eq!(max_pools_bound(16, 256).unwrap(), 272);
        for q in [2u64, 3, 5, 8, 13] {
            assert_eq!(max_pools_bound(q, q * q).unwrap(), q * (q + 1));
        }
        assert!(max_pools_bound(1, 4).is_err());
    }

    #[test]
    fn fano_plane_is_a_7_3_3_multipool() {
        let report = validate_multipool(&fano_plane(), 3, 3);
        assert!(report.is_multipool, "{:?}", report.violations);
        assert_eq!(report.max_pairwise_overlap, 1);
    }

    #[test]
    fn duplicated_pool_is_caught() {
        let mut pools = build(3, 2).pools().to_vec();
        pools.push(pools[0].clone());
        let mat = PoolingMatrix::from_pools(9, pools).unwrap();
        let report = validate_multipool(&mat, 3, 2);
        assert!(!report.is_multipool);
        assert!(report.max_pairwise_overlap >= 2);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Overlap { shared: 2, .. })));
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::ColumnSum {
                sum: 3,
                expected: 2,
                ..
            }
        )));
    }

    #[test]
    fn wrong_parameters_list_row_and_column_violations() {
        let report = validate_multipool(&build(3, 2), 4, 3);
        assert!(!report.is_multipool);
        assert_eq!(
            report
                .violations
                .iter()
                .filter(|v| matches!(v, Violation::RowSum { .. }))
                .count(),
            6
        );
        assert_eq!(
            report
                .violations
                .iter()
                .filter(|v| matches!(v, Violation::ColumnSum { .. }))
                .count(),
            9
        );
    }

    #[test]
    fn layers_partition_the_items() {
        for (q, m) in [(4, 5), (5, 3), (9, 10), (16, 17)] {
            let mat = build(q, m);
            let n = mat.n();
            for layer in mat.pools().chunks(q as usize) {
                let mut seen = vec![0; n];
                for pool in layer {
                    for &j in pool {
                        seen[j] += 1;
                    }
                }
                assert!(seen.iter().all(|&c| c == 1), "q={q} m={m}");
            }
        }
    }

    #[test]
    fn construction_is_deterministic_and_dual_views_agree() {
        let a = build(9, 7);
        let b = build(9, 7);
        assert_eq!(a, b);
        assert_eq!(write_matrix_json(&a), write_matrix_json(&b));
        let membership: Vec<Vec<usize>> = (0..a.n()).map(|j| a.item_pools(j).to_vec()).collect();
        assert_eq!(a.membership_from_pools(), membership);
        assert_eq!(a.pools_from_membership(), a.pools());
        let rebuilt = PoolingMatrix::from_pools(a.n(), a.pools_from_membership()).unwrap();
        assert_eq!(rebuilt.pools_from_membership(), rebuilt.pools());
    }

    #[test]
    fn from_pools_rejects_bad_indices() {
        assert!(PoolingMatrix::from_pools(3, vec![vec![0, 3]]).is_err());
        assert!(PoolingMatrix::from_pools(3, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn grid_of_supported_designs_validates() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13] {
            for m in 1..=q + 1 {
                let mat = build(q, m);
                let report = validate_multipool(&mat, q as usize, m as usize);
                assert!(
                    report.is_multipool,
                    "q={q} m={m}: {:?}",
                    report.violations.first()
                );
            }
        }
    }
}
