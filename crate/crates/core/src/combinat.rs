//! Exact combinatorics and symmetric polynomial functions.
//!
//! Subsets are zero-based: a [`SubsetIndex`] over `n` coordinates holds
//! indices in `0..n`.

use num_traits::Float;

use crate::error::{PdiError, Result};

/// Largest argument accepted by [`bell`].
pub const MAX_BELL: usize = 12;
/// Largest ground set accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_N: usize = 8;

/// A subset of `{0, .., n-1}` stored as a strictly increasing list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    n: usize,
    members: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(PdiError::Argument("subset has repeated members".into()));
        }
        if let Some(&m) = members.last() {
            if m >= n {
                return Err(PdiError::Bounds(format!("member {m} outside 0..{n}")));
            }
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, members: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, members: (0..n).collect() }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self { n, members: (0..n).filter(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, members: (0..self.n).filter(|&i| !self.contains(i)).collect() }
    }
}

/// All subsets of size `j` of `{0, .., n-1}` in lexicographic order.
pub fn subsets(n: usize, j: usize) -> Vec<SubsetIndex> {
    let mut out = Vec::new();
    if j > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        out.push(SubsetIndex { n, members: idx.clone() });
        let mut i = j;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - j + i {
                idx[i] += 1;
                for t in i + 1..j {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A set partition of `{0, .., n-1}`; blocks are ordered by their least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<SubsetIndex>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<SubsetIndex>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.n != n || b.is_empty() {
                return Err(PdiError::Argument(
                    "partition blocks must be nonempty subsets of the same ground set".into(),
                ));
            }
            for &i in b.members() {
                if seen[i] {
                    return Err(PdiError::Argument("partition blocks overlap".into()));
                }
                seen[i] = true;
            }
        }
        if n == 0 || seen.iter().any(|s| !s) {
            return Err(PdiError::Argument("partition blocks do not cover the ground set".into()));
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| b.members()[0]);
        Ok(Self { n, blocks })
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let n = rgs.len();
        let count = rgs.iter().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); count];
        for (i, &b) in rgs.iter().enumerate() {
            members[b].push(i);
        }
        Self { n, blocks: members.into_iter().map(|m| SubsetIndex { n, members: m }).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[SubsetIndex] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Bell number `B_n` by the binomial recurrence.
pub fn bell(n: usize) -> Result<u64> {
    if n > MAX_BELL {
        return Err(PdiError::Bounds(format!("bell({n}) exceeds the supported range 0..={MAX_BELL}")));
    }
    let mut b = vec![1u64];
    for m in 0..n {
        let next = (0..=m).map(|j| binomial(m, j) * b[j]).sum();
        b.push(next);
    }
    Ok(b[n])
}

/// All set partitions of `{0, .., n-1}` in lexicographic restricted growth
/// string order, so the single block partition comes first.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(PdiError::Bounds(format!("partitions of {n} elements are supported for 1..={MAX_PARTITION_N}")));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    // prefix_max[i] = max(rgs[0..=i])
    let mut prefix_max = vec![0usize; n];
    loop {
        out.push(Partition::from_rgs(&rgs));
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if rgs[i] <= prefix_max[i - 1] {
                rgs[i] += 1;
                prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
                for t in i + 1..n {
                    rgs[t] = 0;
                    prefix_max[t] = prefix_max[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Streitberg coefficient `(-1)^(|pi|-1) (|pi|-1)!`.
pub fn streitberg_coefficient(pi: &Partition) -> i64 {
    let m = pi.len() as i64 - 1;
    let fact: i64 = (1..=m).product();
    if m % 2 == 0 {
        fact
    } else {
        -fact
    }
}

/// Coefficient `(-1)^(k-j) C(n-j-1, n-k)` attached to the size `j` faces in the
/// order `k` interaction of `n` coordinates. Requires `j < k <= n`.
pub fn interaction_coefficient(n: usize, k: usize, j: usize) -> i64 {
    debug_assert!(j < k && k <= n);
    let c = binomial(n - j - 1, n - k) as i64;
    if (k - j).is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// All elementary symmetric polynomials `p_0, .., p_n` of `r`.
pub fn elem_sym_all<T: Float>(r: &[T]) -> Vec<T> {
    let mut p = vec![T::zero(); r.len() + 1];
    p[0] = T::one();
    for (i, &x) in r.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            p[j] = p[j] + x * p[j - 1];
        }
    }
    p
}

/// Elementary symmetric polynomial `p_k(r)`.
pub fn elem_sym<T: Float>(k: usize, r: &[T]) -> Result<T> {
    if k > r.len() {
        return Err(PdiError::Bounds(format!("elem_sym order {k} exceeds {} variables", r.len())));
    }
    let mut p = vec![T::zero(); k + 1];
    p[0] = T::one();
    for (i, &x) in r.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            p[j] = p[j] + x * p[j - 1];
        }
    }
    Ok(p[k])
}

fn check_order(k: usize, n: usize, len: usize) -> Result<()> {
    if k > n {
        return Err(PdiError::Bounds(format!("order {k} exceeds n = {n}")));
    }
    if len != n {
        return Err(PdiError::Bounds(format!("expected {n} entries, got {len}")));
    }
    Ok(())
}

fn cast<T: Float>(x: i64) -> T {
    T::from(x).expect("integer fits the float type")
}

/// `H^n_k(r) = p_n(r) + sum_{j<k} (-1)^(k-j) C(n-j-1, n-k) p_j(r)`.
pub fn h_poly<T: Float>(k: usize, n: usize, r: &[T]) -> Result<T> {
    check_order(k, n, r.len())?;
    let p = elem_sym_all(r);
    let mut acc = p[n];
    for (j, &pj) in p.iter().enumerate().take(k) {
        acc = acc + cast::<T>(interaction_coefficient(n, k, j)) * pj;
    }
    Ok(acc)
}

/// `E^n_k(s) = H^n_k(e^{-s_1}, .., e^{-s_n})`.
///
/// Evaluated through `b_i = 1 - e^{-s_i}` using
/// `H^n_k(1 - b) = sum_{m >= k} (-1)^m p_m(b)`, which avoids the cancellation
/// of the alternating sum near `s = 0`.
pub fn e_func<T: Float>(k: usize, n: usize, s: &[T]) -> Result<T> {
    check_order(k, n, s.len())?;
    if s.iter().any(|&x| x.is_nan() || x < T::zero()) {
        return Err(PdiError::Domain("E requires nonnegative arguments".into()));
    }
    let b: Vec<T> = s.iter().map(|&x| -(-x).exp_m1()).collect();
    let p = elem_sym_all(&b);
    let mut acc = T::zero();
    for (m, &pm) in p.iter().enumerate().skip(k) {
        acc = if m % 2 == 0 { acc + pm } else { acc - pm };
    }
    Ok(acc)
}

/// Membership of `t` in the boundary set: fewer than `k` positive entries.
pub fn in_boundary<T: Float>(t: &[T], k: usize) -> bool {
    t.iter().filter(|&&x| x > T::zero()).count() < k
}
