//! Finitely supported signed measures on product spaces.

use std::collections::HashMap;

use rand::Rng as _;

use crate::combinat::{
    enumerate_partitions, interaction_coefficient, streitberg_coefficient, subsets, SubsetIndex, MAX_PARTITION_N,
};
use crate::error::{PdiError, Result};
use crate::rng::{self, streams};
use crate::tolerances::{MAX_EXPANSION_ATOMS, PROBABILITY_MASS, ZERO_WEIGHT_REL};
use crate::Real;

/// Ambient dimensions of the factors `X_1, .., X_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceSignature {
    dims: Vec<usize>,
}

impl SpaceSignature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(PdiError::Argument("a signature needs at least one factor and positive dimensions".into()));
        }
        Ok(Self { dims })
    }

    /// `n` scalar factors.
    pub fn scalar(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Signature of the factors listed in `f`.
    pub fn restrict(&self, f: &SubsetIndex) -> Result<Self> {
        Self::new(f.members().iter().map(|&i| self.dims[i]).collect())
    }
}

/// A point of the product space: one real vector per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    components: Vec<Vec<Real>>,
}

impl ProductPoint {
    pub fn new(components: Vec<Vec<Real>>) -> Self {
        Self { components }
    }

    /// Point with one scalar per factor.
    pub fn scalars(values: &[Real]) -> Self {
        Self { components: values.iter().map(|&v| vec![v]).collect() }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &[Real] {
        &self.components[i]
    }

    pub fn components(&self) -> &[Vec<Real>] {
        &self.components
    }

    /// Signature read off the component lengths.
    pub fn signature(&self) -> Result<SpaceSignature> {
        SpaceSignature::new(self.components.iter().map(Vec::len).collect())
    }

    pub fn matches(&self, sig: &SpaceSignature) -> bool {
        self.components.len() == sig.n() && self.components.iter().zip(sig.dims()).all(|(c, &d)| c.len() == d)
    }

    /// Coordinates in `f` taken from `self`, the remaining ones from `other`.
    pub fn mix(&self, other: &ProductPoint, f: &SubsetIndex) -> ProductPoint {
        let components = (0..self.n())
            .map(|i| if f.contains(i) { self.components[i].clone() } else { other.components[i].clone() })
            .collect();
        ProductPoint { components }
    }

    /// Projection onto the factors in `f`.
    pub fn project(&self, f: &SubsetIndex) -> ProductPoint {
        ProductPoint { components: f.members().iter().map(|&i| self.components[i].clone()).collect() }
    }

    fn key(&self) -> Vec<u64> {
        self.components.iter().flatten().map(|&v| if v == 0.0 { 0u64 } else { v.to_bits() }).collect()
    }

    fn sup_distance(&self, other: &ProductPoint) -> Real {
        self.components
            .iter()
            .flatten()
            .zip(other.components.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Finitely supported signed measure `sum_a w_a delta_{x_a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    signature: SpaceSignature,
    atoms: Vec<(ProductPoint, Real)>,
}

/// Merges atoms with identical points in first occurrence order.
struct Accumulator {
    signature: SpaceSignature,
    index: HashMap<Vec<u64>, usize>,
    atoms: Vec<(ProductPoint, Real)>,
    input_variation: Real,
}

impl Accumulator {
    fn new(signature: SpaceSignature) -> Self {
        Self { signature, index: HashMap::new(), atoms: Vec::new(), input_variation: 0.0 }
    }

    fn add(&mut self, point: ProductPoint, w: Real) {
        self.input_variation += w.abs();
        match self.index.get(&point.key()) {
            Some(&i) => self.atoms[i].1 += w,
            None => {
                self.index.insert(point.key(), self.atoms.len());
                self.atoms.push((point, w));
            }
        }
    }

    fn finish(self) -> DiscreteMeasure {
        let floor = ZERO_WEIGHT_REL * self.input_variation;
        let atoms = self.atoms.into_iter().filter(|(_, w)| *w != 0.0 && w.abs() > floor).collect();
        DiscreteMeasure { signature: self.signature, atoms }
    }

    /// Merged weights without the zero-weight cleanup.
    fn raw(self) -> Vec<(ProductPoint, Real)> {
        self.atoms
    }
}

impl DiscreteMeasure {
    /// Builds a measure; the atoms are kept as given.
    pub fn new(signature: SpaceSignature, atoms: Vec<(ProductPoint, Real)>) -> Result<Self> {
        if let Some((p, _)) = atoms.iter().find(|(p, _)| !p.matches(&signature)) {
            return Err(PdiError::Argument(format!("atom with {} components does not match the signature", p.n())));
        }
        if atoms.iter().any(|(_, w)| !w.is_finite()) {
            return Err(PdiError::Argument("atom weights must be finite".into()));
        }
        Ok(Self { signature, atoms })
    }

    pub fn zero(signature: SpaceSignature) -> Self {
        Self { signature, atoms: Vec::new() }
    }

    /// Unit point mass.
    pub fn dirac(signature: SpaceSignature, x: ProductPoint) -> Result<Self> {
        Self::new(signature, vec![(x, 1.0)])
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn n(&self) -> usize {
        self.signature.n()
    }

    pub fn atoms(&self) -> &[(ProductPoint, Real)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> Real {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn total_variation(&self) -> Real {
        self.atoms.iter().map(|(_, w)| w.abs()).sum()
    }

    /// Merges atoms whose points agree within `merge_tol` in the sup norm and
    /// drops atoms whose weight is negligible relative to the total variation.
    pub fn normalize(&self, merge_tol: Real) -> DiscreteMeasure {
        if merge_tol <= 0.0 {
            let mut acc = Accumulator::new(self.signature.clone());
            for (p, w) in &self.atoms {
                acc.add(p.clone(), *w);
            }
            return acc.finish();
        }
        let mut reps: Vec<(ProductPoint, Real)> = Vec::new();
        for (p, w) in &self.atoms {
            match reps.iter_mut().find(|(q, _)| q.sup_distance(p) <= merge_tol) {
                Some(r) => r.1 += w,
                None => reps.push((p.clone(), *w)),
            }
        }
        let floor = ZERO_WEIGHT_REL * self.total_variation();
        reps.retain(|(_, w)| *w != 0.0 && w.abs() > floor);
        DiscreteMeasure { signature: self.signature.clone(), atoms: reps }
    }

    pub fn scaled(&self, c: Real) -> DiscreteMeasure {
        DiscreteMeasure {
            signature: self.signature.clone(),
            atoms: self.atoms.iter().map(|(p, w)| (p.clone(), c * w)).collect(),
        }
    }

    /// `self + c * other`, normalized.
    pub fn add_scaled(&self, other: &DiscreteMeasure, c: Real) -> Result<DiscreteMeasure> {
        if self.signature != other.signature {
            return Err(PdiError::Argument("measures live on different spaces".into()));
        }
        let mut acc = Accumulator::new(self.signature.clone());
        for (p, w) in &self.atoms {
            acc.add(p.clone(), *w);
        }
        for (p, w) in &other.atoms {
            acc.add(p.clone(), c * w);
        }
        Ok(acc.finish())
    }

    /// Total variation of `self - other`.
    pub fn distance(&self, other: &DiscreteMeasure) -> Result<Real> {
        Ok(self.add_scaled(other, -1.0)?.total_variation())
    }

    pub fn is_probability(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= PROBABILITY_MASS && self.atoms.iter().all(|(_, w)| *w >= 0.0)
    }

    /// Marginal on the factors in `f`.
    pub fn marginal(&self, f: &SubsetIndex) -> Result<DiscreteMeasure> {
        Ok(self.marginal_acc(f)?.finish())
    }

    fn marginal_acc(&self, f: &SubsetIndex) -> Result<Accumulator> {
        if f.is_empty() {
            return Err(PdiError::Argument("marginal onto the empty set of factors".into()));
        }
        if f.n() != self.n() {
            return Err(PdiError::Argument("subset and measure disagree on n".into()));
        }
        let mut acc = Accumulator::new(self.signature.restrict(f)?);
        for (p, w) in &self.atoms {
            acc.add(p.project(f), *w);
        }
        Ok(acc)
    }
}

/// Kronecker product of measures; factors are concatenated in order.
pub fn product(blocks: &[DiscreteMeasure]) -> Result<DiscreteMeasure> {
    if blocks.is_empty() {
        return Err(PdiError::Argument("product of zero measures".into()));
    }
    let mut dims = Vec::new();
    let mut parts = Vec::new();
    let mut offset = 0;
    for b in blocks {
        dims.extend_from_slice(b.signature.dims());
        parts.push(offset..offset + b.n());
        offset += b.n();
    }
    let sig = SpaceSignature::new(dims)?;
    let n = sig.n();
    let placed: Vec<(SubsetIndex, &DiscreteMeasure)> = parts
        .into_iter()
        .zip(blocks)
        .map(|(r, b)| (SubsetIndex::new(n, r.collect()).expect("consecutive block"), b))
        .collect();
    product_on(&sig, &placed)
}

/// Product of measures placed on the disjoint factor groups they are paired
/// with. The groups must cover every factor of `sig`.
pub fn product_on(sig: &SpaceSignature, parts: &[(SubsetIndex, &DiscreteMeasure)]) -> Result<DiscreteMeasure> {
    let n = sig.n();
    let mut owner = vec![usize::MAX; n];
    for (pi, (f, mu)) in parts.iter().enumerate() {
        if f.n() != n || mu.n() != f.len() {
            return Err(PdiError::Argument("product part does not match its factor group".into()));
        }
        for (slot, &i) in f.members().iter().enumerate() {
            if owner[i] != usize::MAX {
                return Err(PdiError::Argument("product factor groups overlap".into()));
            }
            if mu.signature.dims()[slot] != sig.dims()[i] {
                return Err(PdiError::Argument("product part dimension mismatch".into()));
            }
            owner[i] = pi;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(PdiError::Argument("product factor groups do not cover the space".into()));
    }
    let size = parts.iter().try_fold(1usize, |acc, (_, mu)| acc.checked_mul(mu.len()));
    match size {
        Some(s) if s <= MAX_EXPANSION_ATOMS => {}
        _ => {
            return Err(PdiError::Capacity(format!("product measure would have more than {MAX_EXPANSION_ATOMS} atoms")))
        }
    }
    let mut acc = Accumulator::new(sig.clone());
    if parts.iter().any(|(_, mu)| mu.is_empty()) {
        return Ok(acc.finish());
    }
    let mut idx = vec![0usize; parts.len()];
    loop {
        let mut comps: Vec<Vec<Real>> = vec![Vec::new(); n];
        let mut w = 1.0;
        for (pi, (f, mu)) in parts.iter().enumerate() {
            let (p, wp) = &mu.atoms[idx[pi]];
            w *= wp;
            for (slot, &i) in f.members().iter().enumerate() {
                comps[i] = p.components[slot].clone();
            }
        }
        acc.add(ProductPoint::new(comps), w);
        let mut t = parts.len();
        loop {
            if t == 0 {
                return Ok(acc.finish());
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < parts[t].1.len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

fn vanishes(atoms: &[(ProductPoint, Real)], threshold: Real) -> bool {
    atoms.iter().all(|(_, w)| w.abs() <= threshold)
}

/// Membership in `M_k`: every marginal on `k - 1` factors vanishes, the empty
/// marginal being the total mass. For finitely supported measures this is
/// equivalent to vanishing on every rectangle that constrains fewer than `k`
/// coordinates.
pub fn in_mk(mu: &DiscreteMeasure, k: usize, tol: Real) -> Result<bool> {
    let n = mu.n();
    if k > n {
        return Err(PdiError::Bounds(format!("order {k} exceeds n = {n}")));
    }
    if k == 0 {
        return Ok(true);
    }
    let threshold = tol * mu.total_variation();
    if k == 1 {
        return Ok(mu.total_mass().abs() <= threshold);
    }
    for f in subsets(n, k - 1) {
        if !vanishes(&mu.marginal_acc(&f)?.raw(), threshold) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `M_{a,b}` for a measure on `X_split x Y_(n - split)`: the
/// marginal on `F` joined with all `Y` factors vanishes for `|F| = a - 1`,
/// `F` among the first `split` factors, and symmetrically for `b`.
pub fn in_mab(mu: &DiscreteMeasure, a: usize, b: usize, split: usize, tol: Real) -> Result<bool> {
    let n = mu.n();
    if split > n {
        return Err(PdiError::Argument(format!("split {split} exceeds n = {n}")));
    }
    if a > split || b > n - split {
        return Err(PdiError::Bounds("in_mab orders exceed the block sizes".into()));
    }
    let threshold = tol * mu.total_variation();
    let side = |order: usize, own: Vec<usize>, other: Vec<usize>| -> Result<bool> {
        if order == 0 {
            return Ok(true);
        }
        for f in subsets(own.len(), order - 1) {
            let mut members: Vec<usize> = f.members().iter().map(|&i| own[i]).collect();
            members.extend_from_slice(&other);
            if members.is_empty() {
                if mu.total_mass().abs() > threshold {
                    return Ok(false);
                }
                continue;
            }
            let g = SubsetIndex::new(n, members)?;
            if !vanishes(&mu.marginal_acc(&g)?.raw(), threshold) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let xs: Vec<usize> = (0..split).collect();
    let ys: Vec<usize> = (split..n).collect();
    Ok(side(a, xs.clone(), ys.clone())? && side(b, ys, xs)?)
}

fn require_probability(p: &DiscreteMeasure, name: &str) -> Result<()> {
    if !p.is_probability() {
        return Err(PdiError::Argument(format!("{name} must be a probability measure")));
    }
    Ok(())
}

fn check_order(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(PdiError::Bounds(format!("interaction order {k} outside 1..={n}")));
    }
    Ok(())
}

fn lancaster_with<F>(p: &DiscreteMeasure, k: usize, q_marginal: F) -> Result<DiscreteMeasure>
where
    F: Fn(&SubsetIndex) -> Result<DiscreteMeasure>,
{
    let n = p.n();
    check_order(k, n)?;
    let sig = p.signature().clone();
    let mut terms = Vec::new();
    let mut estimate = p.len();
    for j in 0..k {
        let c = interaction_coefficient(n, k, j) as Real;
        if c == 0.0 {
            continue;
        }
        for f in subsets(n, j) {
            let fc = f.complement();
            let qf = q_marginal(&fc)?;
            let pf = if f.is_empty() { None } else { Some(p.marginal(&f)?) };
            estimate = estimate.saturating_add(qf.len().saturating_mul(pf.as_ref().map_or(1, |m| m.len())));
            if estimate > MAX_EXPANSION_ATOMS {
                return Err(PdiError::Capacity(format!(
                    "interaction expansion exceeds {MAX_EXPANSION_ATOMS} atoms (n = {n}, k = {k}, {} input atoms)",
                    p.len()
                )));
            }
            terms.push((c, f, pf, fc, qf));
        }
    }
    let mut acc = Accumulator::new(sig.clone());
    for (x, w) in p.atoms() {
        acc.add(x.clone(), *w);
    }
    for (c, f, pf, fc, qf) in terms {
        let term = match pf {
            None => qf,
            Some(pf) => product_on(&sig, &[(f, &pf), (fc, &qf)])?,
        };
        for (x, w) in term.atoms {
            acc.add(x, c * w);
        }
    }
    Ok(acc.finish())
}

/// Generalized Lancaster interaction
/// `P + sum_{j<k} (-1)^(k-j) C(n-j-1, n-k) sum_{|F|=j} P_F x Q_{F^c}`.
pub fn lancaster(p: &DiscreteMeasure, q: &DiscreteMeasure, k: usize) -> Result<DiscreteMeasure> {
    require_probability(p, "P")?;
    require_probability(q, "Q")?;
    if p.signature() != q.signature() {
        return Err(PdiError::Argument("P and Q live on different spaces".into()));
    }
    let n = p.n();
    lancaster_with(p, k, |fc| if fc.len() == n { Ok(q.normalize(0.0)) } else { q.marginal(fc) })
}

/// Lancaster interaction against the product of the one dimensional marginals.
pub fn lancaster_self(p: &DiscreteMeasure, k: usize) -> Result<DiscreteMeasure> {
    require_probability(p, "P")?;
    let n = p.n();
    let singles: Vec<DiscreteMeasure> =
        (0..n).map(|i| p.marginal(&SubsetIndex::new(n, vec![i]).expect("valid index"))).collect::<Result<_>>()?;
    lancaster_with(p, k, |fc| {
        let sig = p.signature().restrict(fc)?;
        let m = fc.len();
        let parts: Vec<(SubsetIndex, &DiscreteMeasure)> = fc
            .members()
            .iter()
            .enumerate()
            .map(|(slot, &i)| (SubsetIndex::new(m, vec![slot]).expect("valid index"), &singles[i]))
            .collect();
        product_on(&sig, &parts)
    })
}

/// Product `P_pi` of the block marginals of `p`.
pub fn partition_product(p: &DiscreteMeasure, blocks: &[SubsetIndex]) -> Result<DiscreteMeasure> {
    let marginals: Vec<DiscreteMeasure> = blocks
        .iter()
        .map(|b| if b.len() == p.n() { Ok(p.normalize(0.0)) } else { p.marginal(b) })
        .collect::<Result<_>>()?;
    let parts: Vec<(SubsetIndex, &DiscreteMeasure)> = blocks.iter().cloned().zip(marginals.iter()).collect();
    product_on(p.signature(), &parts)
}

/// Streitberg interaction `sum_pi a_pi P_pi` over all set partitions.
pub fn streitberg(p: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    require_probability(p, "P")?;
    let n = p.n();
    if n > MAX_PARTITION_N {
        return Err(PdiError::Capacity(format!("Streitberg interaction supports n <= {MAX_PARTITION_N}, got {n}")));
    }
    let mut cache: HashMap<u64, DiscreteMeasure> = HashMap::new();
    let partitions = enumerate_partitions(n)?;
    let mut estimate = 0usize;
    for pi in &partitions {
        let mut size = 1usize;
        for b in pi.blocks() {
            let m = match cache.get(&b.mask()) {
                Some(m) => m,
                None => {
                    let m = if b.len() == n { p.normalize(0.0) } else { p.marginal(b)? };
                    cache.entry(b.mask()).or_insert(m)
                }
            };
            size = size.saturating_mul(m.len());
        }
        estimate = estimate.saturating_add(size);
    }
    if estimate > MAX_EXPANSION_ATOMS {
        return Err(PdiError::Capacity(format!(
            "Streitberg expansion would visit {estimate} atoms, limit {MAX_EXPANSION_ATOMS}"
        )));
    }
    let mut acc = Accumulator::new(p.signature().clone());
    for pi in &partitions {
        let c = streitberg_coefficient(pi) as Real;
        let parts: Vec<(SubsetIndex, &DiscreteMeasure)> =
            pi.blocks().iter().map(|b| (b.clone(), &cache[&b.mask()])).collect();
        for (x, w) in product_on(p.signature(), &parts)?.atoms {
            acc.add(x, c * w);
        }
    }
    Ok(acc.finish())
}

fn pair_signature(x1: &ProductPoint, x2: &ProductPoint) -> Result<SpaceSignature> {
    let sig = x1.signature()?;
    if !x2.matches(&sig) {
        return Err(PdiError::Argument("points live on different spaces".into()));
    }
    Ok(sig)
}

/// Interaction measure of two point masses,
/// `delta_{x1} + sum_{j<k} (-1)^(k-j) C(n-j-1, n-k) sum_{|F|=j} delta_{x1_F + x2_{F^c}}`.
pub fn mu_k(x1: &ProductPoint, x2: &ProductPoint, k: usize) -> Result<DiscreteMeasure> {
    let sig = &pair_signature(x1, x2)?;
    let n = sig.n();
    check_order(k, n)?;
    let mut acc = Accumulator::new(sig.clone());
    acc.add(x1.clone(), 1.0);
    for j in 0..k {
        let c = interaction_coefficient(n, k, j) as Real;
        for f in subsets(n, j) {
            acc.add(x1.mix(x2, &f), c);
        }
    }
    Ok(acc.finish())
}

/// `mu_2[x1, x2] + mu_2[x2, x1]`.
pub fn delta2(x1: &ProductPoint, x2: &ProductPoint) -> Result<DiscreteMeasure> {
    let sig = &pair_signature(x1, x2)?;
    let n = sig.n();
    let nf = n as Real;
    let mut acc = Accumulator::new(sig.clone());
    acc.add(x1.clone(), nf);
    acc.add(x2.clone(), nf);
    for i in 0..n {
        let e = SubsetIndex::new(n, vec![i]).expect("valid index");
        acc.add(x2.mix(x1, &e), -1.0);
        acc.add(x1.mix(x2, &e), -1.0);
    }
    Ok(acc.finish())
}

/// Empirical probability of the samples.
pub fn empirical(samples: &[ProductPoint]) -> Result<DiscreteMeasure> {
    if samples.is_empty() {
        return Err(PdiError::Argument("empirical measure of an empty sample".into()));
    }
    let sig = &samples[0].signature()?;
    let w = 1.0 / samples.len() as Real;
    let mut acc = Accumulator::new(sig.clone());
    for s in samples {
        if !s.matches(sig) {
            return Err(PdiError::Argument("sample does not match the signature".into()));
        }
        acc.add(s.clone(), w);
    }
    Ok(acc.finish())
}

/// Reproducible random nonzero element of `M_k`: a signed combination of one to
/// three products of per-factor measures in which `k` randomly chosen factors
/// are centered. At least two support points per factor are used.
pub fn random_mk(sig: &SpaceSignature, k: usize, atoms_per_factor: usize, seed: u64) -> Result<DiscreteMeasure> {
    let n = sig.n();
    check_order(k, n)?;
    let m = atoms_per_factor.max(2);
    let mut attempt = 0u64;
    loop {
        let mut rng = rng::stream(seed, streams::RANDOM_MEASURE + (attempt << 8));
        let terms = rng.random_range(1..=3usize);
        let mut total = DiscreteMeasure::zero(sig.clone());
        for _ in 0..terms {
            let mut order: Vec<usize> = (0..n).collect();
            for i in 0..n {
                let j = rng.random_range(i..n);
                order.swap(i, j);
            }
            let centered = &order[..k];
            let mut factors = Vec::with_capacity(n);
            for i in 0..n {
                let fsig = SpaceSignature::new(vec![sig.dims()[i]])?;
                let mut atoms: Vec<(ProductPoint, Real)> = (0..m)
                    .map(|_| {
                        let x: Vec<Real> = (0..sig.dims()[i]).map(|_| rng.random_range(-1.0..1.0)).collect();
                        (ProductPoint::new(vec![x]), rng.random_range(0.2..1.2))
                    })
                    .collect();
                if centered.contains(&i) {
                    let mean = atoms.iter().map(|(_, w)| w).sum::<Real>() / m as Real;
                    for a in &mut atoms {
                        a.1 -= mean;
                    }
                }
                factors.push(DiscreteMeasure::new(fsig, atoms)?.normalize(0.0));
            }
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let c = sign * rng.random_range(0.5..1.5);
            total = total.add_scaled(&product(&factors)?, c)?;
        }
        if !total.is_empty() {
            return Ok(total);
        }
        attempt += 1;
    }
}
