use std::collections::BTreeMap;

use super::{Matrix, Scalar, SparseVec};

/// How the symmetry isomorphism of the tensor product is signed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SignRule {
    #[default]
    Koszul,
    Plain,
}

impl SignRule {
    pub fn is_koszul(self) -> bool {
        matches!(self, SignRule::Koszul)
    }

    /// The sign for moving an element of degree `a` past one of degree `b`.
    pub fn swap_sign(self, a: i32, b: i32) -> bool {
        self.is_koszul() && (a * b).rem_euclid(2) == 1
    }

    pub fn name(self) -> &'static str {
        match self {
            SignRule::Koszul => "koszul",
            SignRule::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Option<SignRule> {
        match s {
            "koszul" => Some(SignRule::Koszul),
            "plain" => Some(SignRule::Plain),
            _ => None,
        }
    }
}

/// Sign of the permutation that puts `order` into increasing order, counting only
/// inversions between two odd-degree entries. Returns `true` for a minus sign.
pub fn koszul_sign(order: &[usize], degrees: &[i32], rule: SignRule) -> bool {
    if !rule.is_koszul() {
        return false;
    }
    let mut neg = false;
    for a in 0..order.len() {
        if degrees[a].rem_euclid(2) == 0 {
            continue;
        }
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[b].rem_euclid(2) == 1 {
                neg = !neg;
            }
        }
    }
    neg
}

/// A finite-dimensional graded vector space.
///
/// The flat basis lists degrees in increasing order and, inside a degree,
/// the local basis order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedVectorSpace {
    dims: BTreeMap<i32, usize>,
    labels: Option<BTreeMap<i32, Vec<String>>>,
}

impl GradedVectorSpace {
    pub fn zero() -> Self {
        GradedVectorSpace::default()
    }

    pub fn new(dims: BTreeMap<i32, usize>) -> Self {
        GradedVectorSpace { dims: dims.into_iter().filter(|(_, n)| *n > 0).collect(), labels: None }
    }

    pub fn from_pairs(pairs: &[(i32, usize)]) -> Self {
        let mut dims = BTreeMap::new();
        for &(d, n) in pairs {
            *dims.entry(d).or_insert(0) += n;
        }
        GradedVectorSpace::new(dims)
    }

    /// `K` placed in a single degree.
    pub fn unit(degree: i32) -> Self {
        GradedVectorSpace::from_pairs(&[(degree, 1)])
    }

    /// The space whose flat basis has the given (nondecreasing) degrees.
    pub fn from_degrees(degrees: &[i32]) -> Self {
        assert!(degrees.windows(2).all(|w| w[0] <= w[1]), "degrees must be sorted");
        let mut dims = BTreeMap::new();
        for &d in degrees {
            *dims.entry(d).or_insert(0) += 1;
        }
        GradedVectorSpace { dims, labels: None }
    }

    pub fn with_labels(mut self, labels: BTreeMap<i32, Vec<String>>) -> Result<Self, String> {
        for (d, names) in &labels {
            if names.len() != self.dim(*d) {
                return Err(format!(
                    "degree {d} has {} labels for dimension {}",
                    names.len(),
                    self.dim(*d)
                ));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&BTreeMap<i32, Vec<String>>> {
        self.labels.as_ref()
    }

    pub fn dims(&self) -> &BTreeMap<i32, usize> {
        &self.dims
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.dims.keys().next_back().copied()
    }

    /// Flat index of the first basis vector in `degree`.
    pub fn offset(&self, degree: i32) -> usize {
        self.dims.range(..degree).map(|(_, n)| n).sum()
    }

    pub fn flat_index(&self, degree: i32, local: usize) -> usize {
        assert!(local < self.dim(degree));
        self.offset(degree) + local
    }

    /// Degree of every flat basis vector.
    pub fn degrees(&self) -> Vec<i32> {
        self.dims.iter().flat_map(|(&d, &n)| std::iter::repeat_n(d, n)).collect()
    }

    pub fn degree_of(&self, flat: usize) -> i32 {
        let mut acc = 0;
        for (&d, &n) in &self.dims {
            if flat < acc + n {
                return d;
            }
            acc += n;
        }
        panic!("flat index {flat} out of range")
    }

    /// Flat index range of one degree.
    pub fn range(&self, degree: i32) -> std::ops::Range<usize> {
        let o = self.offset(degree);
        o..o + self.dim(degree)
    }

    /// Keeps only degrees `<= cap`.
    pub fn truncate(&self, cap: i32) -> GradedVectorSpace {
        GradedVectorSpace::new(self.dims.range(..=cap).map(|(d, n)| (*d, *n)).collect())
    }

    pub fn direct_sum(&self, other: &GradedVectorSpace) -> GradedVectorSpace {
        let mut dims = self.dims.clone();
        for (d, n) in &other.dims {
            *dims.entry(*d).or_insert(0) += n;
        }
        GradedVectorSpace::new(dims)
    }

    /// Poincaré polynomial coefficients indexed by degree.
    pub fn series(&self) -> BTreeMap<i32, usize> {
        self.dims.clone()
    }
}

/// A degree-preserving linear map between graded spaces, stored by degree blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedLinearMap {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self, String> {
        for (d, m) in &blocks {
            if m.nrows() != target.dim(*d) || m.ncols() != source.dim(*d) {
                return Err(format!(
                    "block in degree {d} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    target.dim(*d),
                    source.dim(*d)
                ));
            }
        }
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(GradedLinearMap { source, target, blocks })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace) -> Self {
        GradedLinearMap { source, target, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space.dims().iter().map(|(&d, &n)| (d, Matrix::identity(n))).collect();
        GradedLinearMap { source: space.clone(), target: space.clone(), blocks }
    }

    /// Splits a flat matrix into degree blocks; fails if it mixes degrees.
    pub fn from_flat(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        flat: &Matrix,
    ) -> Result<Self, String> {
        if flat.nrows() != target.total_dim() || flat.ncols() != source.total_dim() {
            return Err("flat matrix has the wrong shape".into());
        }
        let tdeg = target.degrees();
        let mut blocks = BTreeMap::new();
        for (&d, &n) in source.dims() {
            let src = source.range(d);
            let toff = target.offset(d);
            let tdim = target.dim(d);
            let mut cols = Vec::with_capacity(n);
            for j in src {
                let c = flat.column(j);
                for (i, _) in c.iter() {
                    if tdeg[i] != d {
                        return Err(format!("map is not degree-preserving at source degree {d}"));
                    }
                }
                cols.push(c.map_indices(|i| i - toff));
            }
            blocks.insert(d, Matrix::from_columns(tdim, cols));
        }
        GradedLinearMap::new(source, target, blocks)
    }

    pub fn to_flat(&self) -> Matrix {
        let mut cols = vec![SparseVec::new(); self.source.total_dim()];
        for (&d, m) in &self.blocks {
            let soff = self.source.offset(d);
            let toff = self.target.offset(d);
            for (j, c) in m.columns().iter().enumerate() {
                cols[soff + j] = c.map_indices(|i| i + toff);
            }
        }
        Matrix::from_columns(self.target.total_dim(), cols)
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    pub fn block(&self, degree: i32) -> Matrix {
        self.blocks
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(degree), self.source.dim(degree)))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &GradedLinearMap) -> GradedLinearMap {
        assert_eq!(rhs.target.dims(), self.source.dims(), "composable maps required");
        let mut blocks = BTreeMap::new();
        for (&d, m) in &rhs.blocks {
            if let Some(l) = self.blocks.get(&d) {
                blocks.insert(d, l.mul(m));
            }
        }
        GradedLinearMap::new(rhs.source.clone(), self.target.clone(), blocks).expect("shapes agree")
    }

    pub fn rank(&self, degree: i32) -> usize {
        self.blocks.get(&degree).map_or(0, Matrix::rank)
    }

    pub fn is_identity(&self) -> bool {
        self.source.dims() == self.target.dims()
            && self.source.dims().iter().all(|(d, _)| self.block(*d).is_identity())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims() == self.target.dims()
            && self.source.dims().iter().all(|(d, n)| self.rank(*d) == *n)
    }

    pub fn is_surjective(&self) -> bool {
        self.target.dims().iter().all(|(d, n)| self.rank(*d) == *n)
    }

    pub fn scale(&self, c: &Scalar) -> GradedLinearMap {
        GradedLinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|(d, m)| (*d, m.scale(c))).collect(),
        }
        .normalized()
    }

    pub fn sub(&self, other: &GradedLinearMap) -> GradedLinearMap {
        let mut blocks = BTreeMap::new();
        for &d in self.source.dims().keys() {
            blocks.insert(d, self.block(d).sub(&other.block(d)));
        }
        GradedLinearMap::new(self.source.clone(), self.target.clone(), blocks).expect("same shape")
    }

    fn normalized(mut self) -> Self {
        self.blocks.retain(|_, m| !m.is_zero());
        self
    }
}

/// The tensor product of two graded spaces with its basis bookkeeping.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub space: GradedVectorSpace,
    /// Flat `(v, w)` index pairs, in the flat order of `space`.
    pub pairs: Vec<(usize, usize)>,
    pub rule: SignRule,
    left_degrees: Vec<i32>,
    right_degrees: Vec<i32>,
}

impl TensorProduct {
    /// Flat index of `v ⊗ w` in the product.
    pub fn index_of(&self, v: usize, w: usize) -> usize {
        self.pairs.binary_search_by(|p| self.cmp_pairs(*p, (v, w))).expect("pair present")
    }

    fn cmp_pairs(&self, a: (usize, usize), b: (usize, usize)) -> std::cmp::Ordering {
        self.degree_of_pair(a).cmp(&self.degree_of_pair(b)).then(a.cmp(&b))
    }

    fn degree_of_pair(&self, p: (usize, usize)) -> i32 {
        self.left_degrees[p.0] + self.right_degrees[p.1]
    }
}

impl TensorProduct {
    fn build(v: &GradedVectorSpace, w: &GradedVectorSpace, rule: SignRule) -> Self {
        let (ld, rd) = (v.degrees(), w.degrees());
        let mut pairs: Vec<(usize, usize)> =
            (0..ld.len()).flat_map(|a| (0..rd.len()).map(move |b| (a, b))).collect();
        pairs.sort_by(|a, b| (ld[a.0] + rd[a.1]).cmp(&(ld[b.0] + rd[b.1])).then(a.cmp(b)));
        let degs: Vec<i32> = pairs.iter().map(|&(a, b)| ld[a] + rd[b]).collect();
        TensorProduct {
            space: GradedVectorSpace::from_degrees(&degs),
            pairs,
            rule,
            left_degrees: ld,
            right_degrees: rd,
        }
    }
}

/// `V ⊗ W`, basis ordered by degree and then lexicographically with `V` major.
pub fn tensor_product(v: &GradedVectorSpace, w: &GradedVectorSpace, rule: SignRule) -> TensorProduct {
    TensorProduct::build(v, w, rule)
}

/// The symmetry isomorphism `V ⊗ W → W ⊗ V`.
pub fn swap_map(v: &GradedVectorSpace, w: &GradedVectorSpace, rule: SignRule) -> GradedLinearMap {
    let src = tensor_product(v, w, rule);
    let dst = tensor_product(w, v, rule);
    let (ld, rd) = (v.degrees(), w.degrees());
    let cols = src
        .pairs
        .iter()
        .map(|&(a, b)| {
            let sign = Scalar::sign(rule.swap_sign(ld[a], rd[b]));
            SparseVec::single(dst.index_of(b, a), sign)
        })
        .collect();
    let flat = Matrix::from_columns(dst.space.total_dim(), cols);
    GradedLinearMap::from_flat(src.space, dst.space, &flat).expect("degree preserving")
}

/// Kernel with its inclusion and cokernel with its projection, degree by degree.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: GradedVectorSpace,
    pub inclusion: GradedLinearMap,
    pub cokernel: GradedVectorSpace,
    pub projection: GradedLinearMap,
}

pub fn kernel_cokernel(f: &GradedLinearMap) -> KernelCokernel {
    let mut kdims = BTreeMap::new();
    let mut kblocks = BTreeMap::new();
    let mut cdims = BTreeMap::new();
    let mut cblocks = BTreeMap::new();
    for (&d, &n) in f.source().dims() {
        let m = f.block(d);
        let basis = m.kernel_basis();
        kdims.insert(d, basis.len());
        kblocks.insert(d, Matrix::from_columns(n, basis));
    }
    for (&d, &n) in f.target().dims() {
        let m = f.block(d);
        let (rows, proj) = cokernel_projection(&m, n);
        cdims.insert(d, rows);
        cblocks.insert(d, proj);
    }
    let kernel = GradedVectorSpace::new(kdims);
    let cokernel = GradedVectorSpace::new(cdims);
    let kblocks = kblocks.into_iter().filter(|(d, _)| kernel.dim(*d) > 0).collect();
    let cblocks = cblocks.into_iter().filter(|(d, _)| cokernel.dim(*d) > 0).collect();
    KernelCokernel {
        inclusion: GradedLinearMap::new(kernel.clone(), f.source().clone(), kblocks).expect("shape"),
        projection: GradedLinearMap::new(f.target().clone(), cokernel.clone(), cblocks).expect("shape"),
        kernel,
        cokernel,
    }
}

/// Projection onto the complement of the column space: coordinates on the
/// non-pivot positions after reducing by the image.
pub(crate) fn cokernel_projection(m: &Matrix, target_dim: usize) -> (usize, Matrix) {
    let mut e = super::Echelon::new();
    for c in m.columns() {
        e.insert(c);
    }
    let free: Vec<usize> = (0..target_dim).filter(|i| !e.is_pivot(*i)).collect();
    let mut pos = vec![usize::MAX; target_dim];
    for (k, &i) in free.iter().enumerate() {
        pos[i] = k;
    }
    let cols = (0..target_dim)
        .map(|i| {
            let r = e.reduce(&SparseVec::unit(i));
            r.map_indices(|j| pos[j])
        })
        .collect();
    (free.len(), Matrix::from_columns(free.len(), cols))
}

/// A right inverse of `p` if `p` is onto in every degree.
pub fn solve_section(p: &GradedLinearMap) -> Option<GradedLinearMap> {
    let mut blocks = BTreeMap::new();
    for (&d, &n) in p.target().dims() {
        let m = p.block(d);
        let s = m.right_inverse()?;
        debug_assert_eq!(s.ncols(), n);
        blocks.insert(d, s);
    }
    Some(GradedLinearMap::new(p.target().clone(), p.source().clone(), blocks).expect("shape"))
}
