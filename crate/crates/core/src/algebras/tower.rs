use std::collections::BTreeMap;

use crate::exactlin::{Echelon, GradedLinearMap, GradedVectorSpace, Matrix, SparseVec};
use crate::operads::is_primitively_generated;
use crate::{Error, Result};

use super::{bar_resolution, dims_of, free_algebra, theta_image, AlgebraOverOperad, Quotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerMode {
    /// `I/Iⁿ = C / Σ_{k≥n} im θ_k`.
    Direct,
    /// `H₀` of `Qₙ` applied to the bar resolution.
    Derived,
}

impl TowerMode {
    pub fn parse(s: &str) -> Option<TowerMode> {
        match s {
            "direct" => Some(TowerMode::Direct),
            "derived" => Some(TowerMode::Derived),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TowerMode::Direct => "direct",
            TowerMode::Derived => "derived",
        }
    }
}

/// `I/Iⁿ(C)` for `1 ≤ n ≤ n_max`, each a quotient of a fixed ambient space.
#[derive(Clone, Debug)]
pub struct AugmentationTower {
    pub mode: TowerMode,
    /// `levels[n − 1] = I/Iⁿ`.
    pub levels: Vec<Quotient>,
    /// `connecting[n − 1]: I/I^{n+1} → I/Iⁿ`.
    pub connecting: Vec<Matrix>,
    /// `layers[n − 1] = Iⁿ/I^{n+1}` by degree.
    pub layers: Vec<BTreeMap<i32, usize>>,
}

impl AugmentationTower {
    pub fn level(&self, n: usize) -> &GradedVectorSpace {
        &self.levels[n - 1].space
    }

    pub fn layer(&self, n: usize) -> &BTreeMap<i32, usize> {
        &self.layers[n - 1]
    }

    pub fn connecting_maps_surjective(&self) -> bool {
        self.connecting.iter().zip(&self.levels).all(|(m, target)| m.rank() == target.space.total_dim())
    }
}

pub fn tower(c: &AlgebraOverOperad, n_max: usize, mode: TowerMode) -> Result<AugmentationTower> {
    let (ambient, subspaces) = match mode {
        TowerMode::Direct => {
            let mut subs = vec![full(c.carrier())];
            subs.extend((2..=n_max + 1).map(|n| theta_image(c, n)));
            (c.carrier().clone(), subs)
        }
        TowerMode::Derived => {
            let bar = bar_resolution(c, 0)?;
            let b0 = free_algebra(c.operad(), c.carrier(), c.cap())?;
            let diff = bar.boundary(1);
            let mut subs = vec![full(b0.carrier())];
            for n in 2..=n_max + 1 {
                let mut w = theta_image(&b0, n);
                for col in diff.columns() {
                    w.insert(col);
                }
                subs.push(w);
            }
            (b0.carrier().clone(), subs)
        }
    };
    let levels: Vec<Quotient> = subspaces.iter().map(|w| Quotient::new(&ambient, w)).collect();
    let mut connecting = Vec::new();
    let mut layers = Vec::new();
    for n in 1..=n_max {
        let (upper, lower) = (&levels[n], &levels[n - 1]);
        connecting.push(lower.projection.select_columns(&upper.kept));
        let mut layer = BTreeMap::new();
        for (&d, &k) in upper.space.dims() {
            let diff = k - lower.space.dim(d);
            if diff > 0 {
                layer.insert(d, diff);
            }
        }
        layers.push(layer);
    }
    Ok(AugmentationTower { mode, levels: levels[..n_max.max(1)].to_vec(), connecting, layers })
}

fn full(space: &GradedVectorSpace) -> Echelon {
    let mut e = Echelon::new();
    for i in 0..space.total_dim() {
        e.insert(&SparseVec::unit(i));
    }
    e
}

/// Both sides of `Iⁿ/I^{n+1}(C) ≅ a(n) ⊗_{Σₙ} (I/I²(C))^{⊗n}`.
#[derive(Clone, Debug)]
pub struct LayerComparison {
    pub holds: bool,
    pub layer: BTreeMap<i32, usize>,
    pub expected: BTreeMap<i32, usize>,
}

pub fn layer_compare(c: &AlgebraOverOperad, n: usize, mode: TowerMode) -> Result<LayerComparison> {
    if n == 0 {
        return Err(Error::Invalid("layers start at n = 1".into()));
    }
    let report = is_primitively_generated(c.operad(), &[1, 2], c.cap())?;
    if let Some((arity, _, degree)) = report.witness {
        return Err(Error::NotPrimitivelyGenerated { arity, degree });
    }
    let t = tower(c, n.max(1), mode)?;
    let layer = t.layer(n).clone();
    let indecomposables = if n >= 2 { t.level(2).clone() } else { tower(c, 2, mode)?.level(2).clone() };
    let seq = c.operad().seq().layer(n);
    let expected = dims_of(crate::symseq::evaluate(&seq, &indecomposables, c.cap())?.space());
    Ok(LayerComparison { holds: layer == expected, layer, expected })
}

/// The map `α: T_a(I/I²C) → C` and the level-by-level comparison of the towers.
#[derive(Clone, Debug)]
pub struct SplitReport {
    pub alpha: Matrix,
    pub source: GradedVectorSpace,
    /// Whether `I/Iⁿ(α)` is an isomorphism, for `n = 2, …, n_max`.
    pub levels: Vec<bool>,
    /// First failing layer `(n, degree)`: `Iⁿ/I^{n+1}` is where `α` stops being iso.
    pub witness: Option<(usize, i32)>,
    pub is_isomorphism: bool,
}

impl SplitReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none() && self.is_isomorphism
    }
}

/// Builds `α = θ ∘ T_a(φ)` and checks `I/Iⁿ(α)` degreewise for `n ≤ n_max`.
pub fn split_algebra(c: &AlgebraOverOperad, phi: &GradedLinearMap, n_max: usize) -> Result<SplitReport> {
    let q = super::q_n_functor(c, 2)?;
    if phi.source().dims() != q.space.dims() || phi.target().dims() != c.carrier().dims() {
        return Err(Error::NotASection("φ must map I/I²(C) into C".into()));
    }
    let phi_flat = phi.to_flat();
    if !q.projection.mul(&phi_flat).is_identity() {
        return Err(Error::NotASection("projection ∘ φ is not the identity".into()));
    }
    let source = free_algebra(c.operad(), &q.space, c.cap())?;
    let eval = source.free_evaluation().clone();
    let cols = (0..source.dim())
        .map(|idx| {
            let (_, m, tuple) = eval.representative(idx);
            let inputs: Vec<SparseVec> = tuple.iter().map(|&i| phi_flat.column(i).clone()).collect();
            c.theta(&m, &inputs)
        })
        .collect();
    let alpha = Matrix::from_columns(c.dim(), cols);
    let mut levels = Vec::new();
    let mut witness = None;
    for n in 2..=n_max {
        let lo = Quotient::new(source.carrier(), &theta_image(&source, n));
        let hi = Quotient::new(c.carrier(), &theta_image(c, n));
        let induced = hi.projection.mul(&alpha.select_columns(&lo.kept));
        let bad = first_non_iso(&induced, &lo.space, &hi.space);
        levels.push(bad.is_none());
        if witness.is_none() {
            witness = bad.map(|d| (n - 1, d));
        }
    }
    let is_isomorphism = first_non_iso(&alpha, source.carrier(), c.carrier()).is_none();
    Ok(SplitReport { alpha, source: source.carrier().clone(), levels, witness, is_isomorphism })
}

/// Lowest degree where a degree-preserving map fails to be bijective.
fn first_non_iso(m: &Matrix, source: &GradedVectorSpace, target: &GradedVectorSpace) -> Option<i32> {
    let degrees: std::collections::BTreeSet<i32> = source.dims().keys().chain(target.dims().keys()).copied().collect();
    for d in degrees {
        let (s, t) = (source.dim(d), target.dim(d));
        if s != t {
            return Some(d);
        }
        if s == 0 {
            continue;
        }
        let cols: Vec<usize> = source.range(d).collect();
        let rows: Vec<usize> = target.range(d).collect();
        if m.select_columns(&cols).select_rows(&rows).rank() != s {
            return Some(d);
        }
    }
    None
}
