use std::collections::{BTreeMap, HashMap, VecDeque};

use super::perm::{factorial, Permutation};
use crate::exactlin::{Accumulator, GradedLinearMap, GradedVectorSpace, Matrix, Scalar, SparseVec};
use crate::{Error, Result};

pub const DEFAULT_ARITY_CAP: usize = 7;

/// A finite-dimensional graded representation of Σₙ, given by the images of the
/// adjacent transpositions. Generators act on flat coordinates and preserve degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymGroupModule {
    arity: usize,
    space: GradedVectorSpace,
    gens: Vec<Matrix>,
}

/// One failed Coxeter relation. Indices are 1-based generator numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationViolation {
    pub i: usize,
    pub j: Option<usize>,
    pub relation: &'static str,
}

impl RelationViolation {
    pub fn key(&self) -> (usize, &'static str) {
        (self.i, self.relation)
    }
}

/// Coinvariants with the projection onto them and the averaging section.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub space: GradedVectorSpace,
    pub projection: Matrix,
    pub section: Matrix,
}

impl Coinvariants {
    pub fn projection_map(&self, source: &GradedVectorSpace) -> GradedLinearMap {
        GradedLinearMap::from_flat(source.clone(), self.space.clone(), &self.projection)
            .expect("projection preserves degree")
    }

    pub fn section_map(&self, source: &GradedVectorSpace) -> GradedLinearMap {
        GradedLinearMap::from_flat(self.space.clone(), source.clone(), &self.section)
            .expect("section preserves degree")
    }
}

impl SymGroupModule {
    pub fn new(arity: usize, space: GradedVectorSpace, gens: Vec<Matrix>) -> Result<Self> {
        let expected = arity.saturating_sub(1);
        if gens.len() != expected {
            return Err(Error::Invalid(format!(
                "arity {arity} needs {expected} generators, got {}",
                gens.len()
            )));
        }
        let n = space.total_dim();
        let degs = space.degrees();
        for (k, g) in gens.iter().enumerate() {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::Invalid(format!("generator {} is not {n}x{n}", k + 1)));
            }
            for (j, c) in g.columns().iter().enumerate() {
                if c.indices().any(|i| degs[i] != degs[j]) {
                    return Err(Error::Invalid(format!("generator {} mixes degrees", k + 1)));
                }
            }
        }
        Ok(SymGroupModule { arity, space, gens })
    }

    pub fn from_graded_gens(arity: usize, space: GradedVectorSpace, gens: &[GradedLinearMap]) -> Result<Self> {
        SymGroupModule::new(arity, space, gens.iter().map(GradedLinearMap::to_flat).collect())
    }

    pub fn zero(arity: usize) -> Self {
        SymGroupModule {
            arity,
            space: GradedVectorSpace::zero(),
            gens: vec![Matrix::zeros(0, 0); arity.saturating_sub(1)],
        }
    }

    pub fn trivial(arity: usize, degree: i32) -> Self {
        SymGroupModule {
            arity,
            space: GradedVectorSpace::unit(degree),
            gens: vec![Matrix::identity(1); arity.saturating_sub(1)],
        }
    }

    pub fn sign(arity: usize, degree: i32) -> Self {
        SymGroupModule {
            arity,
            space: GradedVectorSpace::unit(degree),
            gens: vec![Matrix::identity(1).scale(&Scalar::from_int(-1)); arity.saturating_sub(1)],
        }
    }

    /// The regular representation on permutations in lexicographic order,
    /// `σ · τ = σ ∘ τ`.
    pub fn regular(arity: usize, degree: i32) -> Self {
        let perms = Permutation::all(arity);
        let gens = (0..arity.saturating_sub(1))
            .map(|i| {
                let s = Permutation::transposition(arity, i);
                let cols = perms.iter().map(|p| SparseVec::unit(s.compose(p).lex_rank())).collect();
                Matrix::from_columns(perms.len(), cols)
            })
            .collect();
        SymGroupModule { arity, space: GradedVectorSpace::from_pairs(&[(degree, perms.len())]), gens }
    }

    /// A permutation representation: `gen_images[i][b]` is the image of basis
    /// vector `b` under `s_{i+1}` together with a sign flag.
    pub fn monomial(
        arity: usize,
        space: GradedVectorSpace,
        gen_images: &[Vec<(usize, bool)>],
    ) -> Result<Self> {
        let n = space.total_dim();
        let gens = gen_images
            .iter()
            .map(|img| {
                Matrix::from_columns(
                    n,
                    img.iter().map(|&(b, neg)| SparseVec::single(b, Scalar::sign(neg))).collect(),
                )
            })
            .collect();
        SymGroupModule::new(arity, space, gens)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn gens(&self) -> &[Matrix] {
        &self.gens
    }

    pub fn gen_map(&self, i: usize) -> GradedLinearMap {
        GradedLinearMap::from_flat(self.space.clone(), self.space.clone(), &self.gens[i])
            .expect("generators preserve degree")
    }

    /// Every violated Coxeter relation, in a fixed order.
    pub fn verify_action(&self) -> Vec<RelationViolation> {
        let n = self.dim();
        let id = Matrix::identity(n);
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if !g.mul(g).sub(&id).is_zero() {
                out.push(RelationViolation { i: i + 1, j: None, relation: "square" });
            }
        }
        for i in 0..self.gens.len().saturating_sub(1) {
            let a = self.gens[i].mul(&self.gens[i + 1]);
            let cube = a.mul(&a).mul(&a);
            if !cube.sub(&id).is_zero() {
                out.push(RelationViolation { i: i + 1, j: Some(i + 2), relation: "braid" });
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 2..self.gens.len() {
                let ab = self.gens[i].mul(&self.gens[j]);
                let ba = self.gens[j].mul(&self.gens[i]);
                if !ab.sub(&ba).is_zero() {
                    out.push(RelationViolation { i: i + 1, j: Some(j + 1), relation: "commute" });
                }
            }
        }
        out
    }

    /// Applies `σ` to a coordinate vector through its bubble-sort word.
    pub fn act(&self, sigma: &Permutation, v: &SparseVec) -> SparseVec {
        debug_assert!(sigma.degree() == self.arity || sigma.is_identity(), "arity mismatch");
        let mut out = v.clone();
        for &i in &sigma.bubble_word() {
            out = self.gens[i].apply(&out);
        }
        out
    }

    pub fn act_flat(&self, sigma: &Permutation) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::identity(n);
        for &i in &sigma.bubble_word() {
            m = self.gens[i].mul(&m);
        }
        m
    }

    pub fn apply_permutation(&self, sigma: &Permutation) -> Result<GradedLinearMap> {
        if sigma.degree() != self.arity {
            return Err(Error::InvalidPermutation(format!(
                "{sigma:?} does not act on {} letters",
                self.arity
            )));
        }
        Ok(GradedLinearMap::from_flat(self.space.clone(), self.space.clone(), &self.act_flat(sigma))
            .expect("degree preserving"))
    }

    /// `(1/|H|) Σ_{h∈H} χ(h) ρ(h)` where `H` is generated by the listed adjacent
    /// transpositions and `χ` sends the flagged generators to −1.
    pub fn twisted_average(&self, gens: &[(usize, bool)]) -> Matrix {
        let n = self.dim();
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        let start = Permutation::identity(self.arity.max(1));
        let mut total: Vec<Accumulator> = (0..n).map(|_| Accumulator::new()).collect();
        let mut queue = VecDeque::new();
        seen.insert(start.clone(), ());
        queue.push_back((start, Matrix::identity(n), false));
        let mut order = 0usize;
        while let Some((p, m, neg)) = queue.pop_front() {
            order += 1;
            let c = Scalar::sign(neg);
            for (j, col) in m.columns().iter().enumerate() {
                total[j].add_vec(col, &c);
            }
            for &(i, odd) in gens {
                let q = Permutation::transposition(p.degree(), i).compose(&p);
                if seen.contains_key(&q) {
                    continue;
                }
                seen.insert(q.clone(), ());
                queue.push_back((q, self.gens[i].mul(&m), neg ^ odd));
            }
        }
        let inv = Scalar::new(1, order as i64);
        Matrix::from_columns(n, total.into_iter().map(|a| a.finish().scale(&inv)).collect())
    }

    pub fn coinvariants(&self) -> Result<Coinvariants> {
        self.coinvariants_capped(DEFAULT_ARITY_CAP)
    }

    pub fn coinvariants_capped(&self, cap: usize) -> Result<Coinvariants> {
        if self.arity > cap {
            return Err(Error::ArityCap { arity: self.arity, cap });
        }
        let gens: Vec<(usize, bool)> = (0..self.arity.saturating_sub(1)).map(|i| (i, false)).collect();
        let e = self.twisted_average(&gens);
        Ok(coinvariants_from_average(&self.space, &e))
    }

    /// The subspace fixed by every generator.
    pub fn invariants_dim(&self) -> usize {
        if self.gens.is_empty() {
            return self.dim();
        }
        let n = self.dim();
        let id = Matrix::identity(n);
        let mut stacked: Option<Matrix> = None;
        for g in &self.gens {
            let d = g.sub(&id);
            stacked = Some(match stacked {
                None => d,
                Some(s) => s.vstack(&d),
            });
        }
        n - stacked.map_or(0, |s| s.rank())
    }

    /// `Ind_{Σ_{j₁}×…×Σ_{j_k}}^{Σ_n}(M₁ ⊗ … ⊗ M_k)`; basis pairs (coset, tensor) sorted by degree.
    pub fn induce(parts: &[SymGroupModule]) -> Result<SymGroupModule> {
        induce_capped(parts, DEFAULT_ARITY_CAP)
    }

    /// The tensor product `M ⊗ N` of two Σₙ-modules with the diagonal action.
    /// Basis sorted by degree, then lexicographically with `self` major.
    pub fn diagonal_tensor(&self, other: &SymGroupModule) -> SymGroupModule {
        assert_eq!(self.arity, other.arity);
        let tp = crate::exactlin::tensor_product(&self.space, &other.space, crate::exactlin::SignRule::Plain);
        let n = tp.pairs.len();
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                let cols = tp
                    .pairs
                    .iter()
                    .map(|&(x, y)| {
                        let mut terms = Vec::new();
                        for (i, c) in a.column(x).iter() {
                            for (k, d) in b.column(y).iter() {
                                terms.push((tp.index_of(i, k), c * d));
                            }
                        }
                        SparseVec::from_terms(terms)
                    })
                    .collect();
                Matrix::from_columns(n, cols)
            })
            .collect();
        SymGroupModule { arity: self.arity, space: tp.space, gens }
    }
}

/// Coinvariants of an idempotent averaging matrix `e`: projection = nonzero rows
/// of rref(e), section = the pivot columns of `e`.
pub fn coinvariants_from_average(space: &GradedVectorSpace, e: &Matrix) -> Coinvariants {
    let rref = e.rref();
    let pivots: Vec<usize> = rref.iter().map(|(p, _)| *p).collect();
    let degs = space.degrees();
    // Pivots are increasing flat indices, so their degrees are nondecreasing.
    let qdegs: Vec<i32> = pivots.iter().map(|&p| degs[p]).collect();
    let rows: Vec<SparseVec> = rref.into_iter().map(|(_, r)| r).collect();
    let projection = Matrix::from_columns(e.ncols(), rows).transpose();
    let section = e.select_columns(&pivots);
    Coinvariants { space: GradedVectorSpace::from_degrees(&qdegs), projection, section }
}

/// Minimal-length coset representatives of `Σ_{j₁}×…×Σ_{j_k}` in `Σ_n`, as
/// permutations increasing on each consecutive block, in lexicographic order.
pub fn shuffles(parts: &[usize]) -> Vec<Permutation> {
    let n: usize = parts.iter().sum();
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    fn rec(pos: usize, parts: &[usize], used: &mut Vec<usize>, assign: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == assign.len() {
            out.push(assign.clone());
            return;
        }
        for b in 0..parts.len() {
            if used[b] < parts[b] {
                used[b] += 1;
                assign[pos] = b;
                rec(pos + 1, parts, used, assign, out);
                used[b] -= 1;
            }
        }
    }
    let mut words = Vec::new();
    rec(0, parts, &mut vec![0; parts.len()], &mut assign, &mut words);
    // `word[v] = block of value v`; the representative sends the p-th slot of block b
    // to the p-th smallest value assigned to b.
    let mut starts = vec![0; parts.len()];
    for b in 1..parts.len() {
        starts[b] = starts[b - 1] + parts[b - 1];
    }
    for w in words {
        let mut img = vec![0; n];
        let mut fill = starts.clone();
        for (v, &b) in w.iter().enumerate() {
            img[fill[b]] = v;
            fill[b] += 1;
        }
        out.push(Permutation::new(img).expect("bijection"));
    }
    out.sort();
    out
}

fn induce_capped(parts: &[SymGroupModule], cap: usize) -> Result<SymGroupModule> {
    let sizes: Vec<usize> = parts.iter().map(SymGroupModule::arity).collect();
    let n: usize = sizes.iter().sum();
    if n > cap {
        return Err(Error::ArityCap { arity: n, cap });
    }
    let reps = shuffles(&sizes);
    let rep_index: BTreeMap<Permutation, usize> = reps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    // Tensor basis of the parts, lexicographic with the first part major.
    let mut tensor: Vec<(Vec<usize>, i32)> = vec![(Vec::new(), 0)];
    for m in parts {
        let degs = m.space.degrees();
        let mut next = Vec::new();
        for (t, d) in &tensor {
            for (b, db) in degs.iter().enumerate() {
                let mut t2 = t.clone();
                t2.push(b);
                next.push((t2, d + db));
            }
        }
        tensor = next;
    }
    let mut basis: Vec<(usize, usize, i32)> = Vec::new();
    for c in 0..reps.len() {
        for (t, (_, d)) in tensor.iter().enumerate() {
            basis.push((c, t, *d));
        }
    }
    basis.sort_by_key(|&(c, t, d)| (d, c, t));
    let index: HashMap<(usize, usize), usize> =
        basis.iter().enumerate().map(|(k, &(c, t, _))| ((c, t), k)).collect();
    let tindex: HashMap<Vec<usize>, usize> =
        tensor.iter().enumerate().map(|(k, (t, _))| (t.clone(), k)).collect();
    let mut starts = vec![0; sizes.len()];
    for b in 1..sizes.len() {
        starts[b] = starts[b - 1] + sizes[b - 1];
    }
    let degs: Vec<i32> = basis.iter().map(|b| b.2).collect();
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let s = Permutation::transposition(n, i);
        let mut cols = Vec::with_capacity(basis.len());
        for &(c, t, _) in &basis {
            let moved = s.compose(&reps[c]);
            // Split `moved = rep' ∘ y` with y in the Young subgroup.
            let (rep2, y) = split_coset(&moved, &sizes, &starts);
            let c2 = rep_index[&rep2];
            // y acts blockwise on the tensor factors.
            let mut vec: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
            for (b, m) in parts.iter().enumerate() {
                let img = match &y[b] {
                    Some(p) => m.act(p, &SparseVec::unit(tensor[t].0[b])),
                    None => SparseVec::unit(tensor[t].0[b]),
                };
                let mut next = Vec::new();
                for (prefix, coef) in &vec {
                    for (k, x) in img.iter() {
                        let mut p2 = prefix.clone();
                        p2.push(k);
                        next.push((p2, coef * x));
                    }
                }
                vec = next;
            }
            let col = SparseVec::from_terms(vec.into_iter().map(|(tt, x)| (index[&(c2, tindex[&tt])], x)));
            cols.push(col);
        }
        gens.push(Matrix::from_columns(basis.len(), cols));
    }
    SymGroupModule::new(n, GradedVectorSpace::from_degrees(&degs), gens)
}

/// Writes `p = rep ∘ y` with `rep` increasing on consecutive blocks and `y`
/// preserving each block; returns `rep` and the block components of `y`
/// (`None` when a block is fixed pointwise).
fn split_coset(p: &Permutation, sizes: &[usize], starts: &[usize]) -> (Permutation, Vec<Option<Permutation>>) {
    let mut img = p.images().to_vec();
    let mut ys = Vec::new();
    for (b, &len) in sizes.iter().enumerate() {
        let block = &mut img[starts[b]..starts[b] + len];
        let orig: Vec<usize> = block.to_vec();
        block.sort_unstable();
        // y sends slot q to the slot whose sorted value equals orig[q].
        let y: Vec<usize> = orig.iter().map(|v| block.binary_search(v).expect("present")).collect();
        let y = Permutation::new(y).expect("bijection");
        ys.push(if y.is_identity() { None } else { Some(y) });
    }
    (Permutation::new(img).expect("bijection"), ys)
}

pub fn check_arity(arity: usize, cap: usize) -> Result<()> {
    if arity > cap {
        Err(Error::ArityCap { arity, cap })
    } else {
        Ok(())
    }
}

pub fn group_order(n: usize) -> usize {
    factorial(n)
}
