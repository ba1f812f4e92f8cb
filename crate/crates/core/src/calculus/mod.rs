//! Cross effects, Taylor polynomials, layers and differentials of analytic functors.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactlin::{Echelon, GradedVectorSpace, Matrix, SparseVec};
use crate::operads::Operad;
use crate::symrep::Permutation;
use crate::symseq::{evaluate, Evaluation, SymmetricSequence};
use crate::{Error, Result};

/// `X ↦ ⊕ₙ F[n] ⊗_{Σₙ} X^{⊗n}` for a reduced sequence `F`.
#[derive(Clone, Debug)]
pub struct AnalyticFunctor {
    seq: SymmetricSequence,
}

impl AnalyticFunctor {
    pub fn new(seq: SymmetricSequence) -> Result<Self> {
        if seq.dim(0) > 0 {
            return Err(Error::Invalid("analytic functors here are reduced: F[0] must vanish".into()));
        }
        Ok(AnalyticFunctor { seq })
    }

    pub fn from_operad(op: &Operad) -> Self {
        AnalyticFunctor { seq: op.seq().clone() }
    }

    pub fn seq(&self) -> &SymmetricSequence {
        &self.seq
    }

    pub fn max_arity(&self) -> usize {
        self.seq.max_arity()
    }

    pub fn evaluate(&self, x: &GradedVectorSpace, cap: i32) -> Result<Evaluation> {
        evaluate(&self.seq, x, cap)
    }
}

/// `X₁ ∨ … ∨ X_k` with every basis vector labelled by its summand.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub space: GradedVectorSpace,
    /// Summand of each flat basis vector.
    pub labels: Vec<usize>,
    /// `Xᵢ → ∨X` for each summand.
    pub inclusions: Vec<Matrix>,
}

pub fn wedge(inputs: &[GradedVectorSpace]) -> Wedge {
    let mut keyed: Vec<(i32, usize, usize)> = Vec::new();
    for (i, x) in inputs.iter().enumerate() {
        for j in 0..x.total_dim() {
            keyed.push((x.degree_of(j), i, j));
        }
    }
    keyed.sort();
    let degs: Vec<i32> = keyed.iter().map(|k| k.0).collect();
    let labels = keyed.iter().map(|k| k.1).collect();
    let mut cols: Vec<Vec<SparseVec>> = inputs.iter().map(|x| vec![SparseVec::new(); x.total_dim()]).collect();
    for (pos, &(_, i, j)) in keyed.iter().enumerate() {
        cols[i][j] = SparseVec::unit(pos);
    }
    let n = keyed.len();
    Wedge {
        space: GradedVectorSpace::from_degrees(&degs),
        labels,
        inclusions: cols.into_iter().map(|c| Matrix::from_columns(n, c)).collect(),
    }
}

/// A summand of `F(X₁ ∨ … ∨ X_k)` cut out by multidegree.
#[derive(Clone, Debug)]
pub struct MultiFunctorValue {
    pub inputs: Vec<GradedVectorSpace>,
    pub wedge: Wedge,
    pub evaluation: Arc<Evaluation>,
    /// Basis indices of the summand inside `evaluation`.
    pub indices: Vec<usize>,
    pub multidegrees: Vec<Vec<usize>>,
    pub space: GradedVectorSpace,
}

impl MultiFunctorValue {
    fn select(
        inputs: &[GradedVectorSpace],
        wedge: Wedge,
        evaluation: Arc<Evaluation>,
        keep: impl Fn(&[usize]) -> bool,
    ) -> Self {
        let k = inputs.len();
        let mut indices = Vec::new();
        let mut multidegrees = Vec::new();
        for i in 0..evaluation.dim() {
            let md = evaluation.multidegree(i, &wedge.labels, k);
            if keep(&md) {
                indices.push(i);
                multidegrees.push(md);
            }
        }
        let degs: Vec<i32> = indices.iter().map(|&i| evaluation.degree_of(i)).collect();
        MultiFunctorValue {
            inputs: inputs.to_vec(),
            wedge,
            evaluation,
            indices,
            multidegrees,
            space: GradedVectorSpace::from_degrees(&degs),
        }
    }

    /// Coordinate inclusion into `F(∨X)`.
    pub fn inclusion(&self) -> Matrix {
        let cols = self.indices.iter().map(|&i| SparseVec::unit(i)).collect();
        Matrix::from_columns(self.evaluation.dim(), cols)
    }

    /// Coordinate projection `F(∨X) → summand`.
    pub fn projection(&self) -> Matrix {
        let mut pos = vec![None; self.evaluation.dim()];
        for (k, &i) in self.indices.iter().enumerate() {
            pos[i] = Some(k);
        }
        let cols = pos.iter().map(|p| p.map_or(SparseVec::new(), SparseVec::unit)).collect();
        Matrix::from_columns(self.indices.len(), cols)
    }
}

/// `crₖF(X₁, …, X_k)`: the part of `F(X₁ ∨ … ∨ X_k)` using every input.
pub fn cross_effect(f: &AnalyticFunctor, inputs: &[GradedVectorSpace], cap: i32) -> Result<MultiFunctorValue> {
    if inputs.is_empty() {
        return Err(Error::Invalid("cross effects need at least one input".into()));
    }
    let w = wedge(inputs);
    let eval = Arc::new(f.evaluate(&w.space, cap)?);
    Ok(MultiFunctorValue::select(inputs, w, eval, |md| md.iter().all(|&m| m > 0)))
}

/// `PₙF`: every coefficient above arity `n` set to zero.
pub fn taylor_polynomial(f: &AnalyticFunctor, n: usize) -> AnalyticFunctor {
    AnalyticFunctor { seq: f.seq.truncate_to(n) }
}

/// `DₙF`: only the arity-`n` coefficient.
pub fn layer(f: &AnalyticFunctor, n: usize) -> AnalyticFunctor {
    AnalyticFunctor { seq: f.seq.layer(n) }
}

/// `D₁^{(n)} crₙF(S, …, S)` for `S = K` in degree 0, with its identification with `F[n]`.
///
/// Returns the matrix sending a basis vector `m` of `F[n]` to the class of
/// `m ⊗ s₁ ⊗ … ⊗ sₙ`.
pub fn multilinear_part(f: &AnalyticFunctor, n: usize) -> Result<Matrix> {
    let s = GradedVectorSpace::from_pairs(&[(0, n)]);
    let lay = layer(f, n);
    let eval = lay.evaluate(&s, f.seq.component(n).space().max_degree().unwrap_or(0))?;
    let tuple: Vec<usize> = (0..n).collect();
    let cols = (0..f.seq.dim(n)).map(|b| eval.project(n, &SparseVec::unit(b), &tuple)).collect();
    let m = Matrix::from_columns(eval.dim(), cols);
    let rows: Vec<usize> =
        (0..eval.dim()).filter(|&i| eval.multidegree(i, &tuple, n).iter().all(|&c| c == 1)).collect();
    Ok(m.select_rows(&rows))
}

/// `∇F(X; Y)`: the part of `F(X ∨ Y)` linear in `X`.
#[derive(Clone, Debug)]
pub struct Differential {
    pub value: MultiFunctorValue,
}

impl Differential {
    pub fn space(&self) -> &GradedVectorSpace {
        &self.value.space
    }

    /// The derivative map `F(X ∨ Y) → ∇F(X; Y)`.
    pub fn projection(&self) -> Matrix {
        self.value.projection()
    }
}

pub fn differential(f: &AnalyticFunctor, x: &GradedVectorSpace, y: &GradedVectorSpace, cap: i32) -> Result<Differential> {
    let inputs = [x.clone(), y.clone()];
    let w = wedge(&inputs);
    let eval = Arc::new(f.evaluate(&w.space, cap)?);
    Ok(Differential { value: MultiFunctorValue::select(&inputs, w, eval, |md| md[0] == 1) })
}

/// Checks `∇F(X; 0) ≅ D₁F(X) = F[1] ⊗ X` degreewise.
pub fn differential_at_zero_is_linear(f: &AnalyticFunctor, x: &GradedVectorSpace, cap: i32) -> Result<bool> {
    let d = differential(f, x, &GradedVectorSpace::zero(), cap)?;
    let lin = layer(f, 1).evaluate(x, cap)?;
    Ok(d.space().dims() == lin.space().dims())
}

/// One section `∇F(X; ∨_{n−1}X) → F(∨ₙX)`, using copy `copy` as the linear direction.
#[derive(Clone, Debug)]
pub struct SectionData {
    pub n: usize,
    pub copy: usize,
    pub section: Matrix,
    pub projection: Matrix,
    pub composite_is_identity: bool,
}

/// Sections of the derivative maps for `∨ₙX`, `n ≤ n_max`, all copies.
#[derive(Clone, Debug)]
pub struct SplitCondition {
    pub sections: Vec<SectionData>,
}

impl SplitCondition {
    pub fn holds(&self) -> bool {
        self.sections.iter().all(|s| s.composite_is_identity)
    }
}

fn copies(x: &GradedVectorSpace, n: usize) -> Vec<GradedVectorSpace> {
    vec![x.clone(); n]
}

pub fn check_split_condition(f: &AnalyticFunctor, x: &GradedVectorSpace, n_max: usize, cap: i32) -> Result<SplitCondition> {
    let mut sections = Vec::new();
    if f.seq.is_zero() {
        return Ok(SplitCondition { sections });
    }
    for n in 1..=n_max {
        let inputs = copies(x, n);
        let w = wedge(&inputs);
        let eval = Arc::new(f.evaluate(&w.space, cap)?);
        for copy in 0..n {
            let v = MultiFunctorValue::select(&inputs, w.clone(), eval.clone(), |md| md[copy] == 1);
            let section = v.inclusion();
            let projection = v.projection();
            let composite_is_identity = projection.mul(&section).is_identity();
            sections.push(SectionData { n, copy, section, projection, composite_is_identity });
        }
    }
    Ok(SplitCondition { sections })
}

/// `P_{n_max}F(X) ≅ ⊕ₙ DₙF(X)` assembled from the sections.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// `(D₁^{(n)}F(∨ₙX))_{Σₙ} → P_{n_max}F(X)` for each `n`.
    pub blocks: Vec<Matrix>,
    /// Dimensions of each block's source by degree.
    pub block_dims: Vec<BTreeMap<i32, usize>>,
    pub target_dims: BTreeMap<i32, usize>,
    pub is_isomorphism: bool,
}

pub fn build_splitting(
    f: &AnalyticFunctor,
    x: &GradedVectorSpace,
    sections: &SplitCondition,
    n_max: usize,
    cap: i32,
) -> Result<Splitting> {
    for s in &sections.sections {
        if !s.composite_is_identity || !s.projection.mul(&s.section).is_identity() {
            return Err(Error::NotASection(format!("section for n = {} (copy {}) is not split", s.n, s.copy + 1)));
        }
    }
    let p = taylor_polynomial(f, n_max);
    let target = p.evaluate(x, cap)?;
    let mut blocks = Vec::new();
    let mut block_dims = Vec::new();
    for n in 1..=n_max {
        let inputs = copies(x, n);
        let w = wedge(&inputs);
        let eval = Arc::new(f.evaluate(&w.space, cap)?);
        let multilinear = MultiFunctorValue::select(&inputs, w.clone(), eval.clone(), |md| md.iter().all(|&c| c == 1));
        let section = match sections.sections.iter().find(|s| s.n == n) {
            Some(s) if s.section.nrows() == eval.dim() => s.section.clone(),
            Some(_) => return Err(Error::NotASection(format!("section for n = {n} has the wrong shape"))),
            None => multilinear.inclusion(),
        };
        // D₁^{(n)} sits inside the image of each section; check for the first copy.
        let proj_sec = sections.sections.iter().find(|s| s.n == n).map(|s| s.projection.clone());
        let incl = multilinear.inclusion();
        if let Some(ps) = proj_sec {
            let back = section.mul(&ps).mul(&incl);
            if back != incl {
                return Err(Error::NotASection(format!("section for n = {n} does not contain the multilinear part")));
            }
        }
        // F(+): F(∨ₙX) → F(X)
        let fold = fold_matrix(&w, x.total_dim());
        let plus = eval.map_to(&fold, &target);
        let down = plus.mul(&incl);
        // Σₙ-coinvariants of the multilinear part, acting by permuting copies.
        let mut rel = Echelon::new();
        for i in 0..n.saturating_sub(1) {
            let swap = copy_permutation(&w, &Permutation::transposition(n, i), x.total_dim());
            let act = eval.map_to(&swap, &eval);
            let back = multilinear.projection();
            for (k, &idx) in multilinear.indices.iter().enumerate() {
                let moved = back.apply(act.column(idx));
                rel.insert(&moved.sub(&SparseVec::unit(k)));
            }
        }
        let kept: Vec<usize> = (0..multilinear.indices.len()).filter(|&k| !rel.is_pivot(k)).collect();
        for r in rel.reduced_rows() {
            if !down.apply(&r.1).is_zero() {
                return Err(Error::LawFailure(format!("F(+) is not Σ{n}-invariant")));
            }
        }
        let block = down.select_columns(&kept);
        let mut dims = BTreeMap::new();
        for &k in &kept {
            *dims.entry(eval.degree_of(multilinear.indices[k])).or_insert(0) += 1;
        }
        blocks.push(block);
        block_dims.push(dims);
    }
    let mut all = Matrix::zeros(target.dim(), 0);
    for b in &blocks {
        all = all.hstack(b);
    }
    let is_isomorphism = all.ncols() == target.dim() && all.rank() == target.dim();
    Ok(Splitting { blocks, block_dims, target_dims: target.space().dims().clone(), is_isomorphism })
}

fn fold_matrix(w: &Wedge, dim: usize) -> Matrix {
    let mut cols = vec![SparseVec::new(); w.space.total_dim()];
    for inc in &w.inclusions {
        for j in 0..dim {
            for (pos, _) in inc.column(j).iter() {
                cols[pos] = SparseVec::unit(j);
            }
        }
    }
    Matrix::from_columns(dim, cols)
}

fn copy_permutation(w: &Wedge, sigma: &Permutation, dim: usize) -> Matrix {
    let n = w.space.total_dim();
    let mut cols = vec![SparseVec::new(); n];
    for (i, inc) in w.inclusions.iter().enumerate() {
        let target = &w.inclusions[sigma.apply(i)];
        for j in 0..dim {
            let (src, _) = inc.column(j).iter().next().expect("inclusion column");
            cols[src] = target.column(j).clone();
        }
    }
    Matrix::from_columns(n, cols)
}
