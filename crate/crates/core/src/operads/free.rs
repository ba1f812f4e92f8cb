use std::collections::HashMap;
use std::fmt;

use crate::exactlin::{koszul_sign, GradedVectorSpace, Matrix, Scalar, SparseVec};
use crate::symrep::{Permutation, SymGroupModule};
use crate::symseq::{product_tuples, set_partitions, SymmetricSequence};
use crate::{Error, Result};

use super::operad::{Operad, OperadMorphism};

/// A rooted tree with labelled leaves and decorated vertices.
///
/// Canonical form: the children of every vertex are ordered by their minimal leaf.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(usize),
    Node { arity: usize, dec: usize, children: Vec<Tree> },
}

impl Tree {
    pub fn min_leaf(&self) -> usize {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node { children, .. } => children.iter().map(Tree::min_leaf).min().expect("vertices have inputs"),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    fn relabel(&self, map: &impl Fn(usize) -> usize) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(map(*l)),
            Tree::Node { arity, dec, children } => Tree::Node {
                arity: *arity,
                dec: *dec,
                children: children.iter().map(|c| c.relabel(map)).collect(),
            },
        }
    }

    /// Decorations in prefix order.
    fn decorations(&self, out: &mut Vec<(usize, usize)>) {
        if let Tree::Node { arity, dec, children } = self {
            out.push((*arity, *dec));
            children.iter().for_each(|c| c.decorations(out));
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(l) => write!(f, "{}", l + 1),
            Tree::Node { arity, dec, children } => {
                write!(f, "v{arity}.{dec}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The free operad on a symmetric sequence, through arity `N`.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    operad: Operad,
    gens: SymmetricSequence,
    bases: Vec<Vec<Tree>>,
    index: Vec<HashMap<Tree, usize>>,
    degree_cap: Option<i32>,
}

struct Builder<'a> {
    gens: &'a SymmetricSequence,
    cap: Option<i32>,
    memo: HashMap<(usize, i32), Vec<(Tree, i32)>>,
}

impl Builder<'_> {
    fn dec_degree(&self, arity: usize, dec: usize) -> i32 {
        self.gens.component(arity).space().degree_of(dec)
    }

    fn tree_degree(&self, t: &Tree) -> i32 {
        let mut decs = Vec::new();
        t.decorations(&mut decs);
        decs.iter().map(|&(a, d)| self.dec_degree(a, d)).sum()
    }

    /// A lower bound for the degree of a tree with `m` leaves.
    fn floor(&self, m: usize) -> i32 {
        let neg = (2..=self.gens.max_arity())
            .filter_map(|k| self.gens.get(k).and_then(|c| c.space().min_degree()))
            .min()
            .unwrap_or(0)
            .min(0);
        (m as i32 - 1) * neg
    }

    /// Canonical trees on labels `0..m` with degree at most `budget`.
    fn trees(&mut self, m: usize, budget: i32) -> Vec<(Tree, i32)> {
        if let Some(v) = self.memo.get(&(m, budget)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if budget < self.floor(m) {
            return out;
        }
        if m == 1 && budget >= 0 {
            out.push((Tree::Leaf(0), 0));
        }
        for dec in 0..self.gens.dim(1) {
            let d = self.dec_degree(1, dec);
            for (child, cd) in self.trees(m, budget - d) {
                out.push((Tree::Node { arity: 1, dec, children: vec![child] }, d + cd));
            }
        }
        for k in 2..=m {
            if self.gens.dim(k) == 0 {
                continue;
            }
            for p in set_partitions(m).into_iter().filter(|p| p.len() == k) {
                for dec in 0..self.gens.dim(k) {
                    let d = self.dec_degree(k, dec);
                    let lists: Vec<Vec<(Tree, i32)>> = p
                        .iter()
                        .map(|b| {
                            self.trees(b.len(), budget - d)
                                .into_iter()
                                .map(|(t, td)| (t.relabel(&|l| b[l]), td))
                                .collect()
                        })
                        .collect();
                    let dims: Vec<usize> = lists.iter().map(Vec::len).collect();
                    for choice in product_tuples(&dims) {
                        let total: i32 = d + choice.iter().enumerate().map(|(i, &c)| lists[i][c].1).sum::<i32>();
                        if total <= budget {
                            let children = choice.iter().enumerate().map(|(i, &c)| lists[i][c].0.clone()).collect();
                            out.push((Tree::Node { arity: k, dec, children }, total));
                        }
                    }
                }
            }
        }
        self.memo.insert((m, budget), out.clone());
        out
    }

    /// Linear combination of canonical trees equal to `t`.
    fn canonicalize(&self, t: &Tree) -> Vec<(Tree, Scalar)> {
        match t {
            Tree::Leaf(_) => vec![(t.clone(), Scalar::one())],
            Tree::Node { arity, dec, children } => {
                let canon: Vec<Vec<(Tree, Scalar)>> = children.iter().map(|c| self.canonicalize(c)).collect();
                let mins: Vec<usize> = children.iter().map(Tree::min_leaf).collect();
                let beta = Permutation::sorting(&mins);
                let decs = if beta.is_identity() {
                    SparseVec::unit(*dec)
                } else {
                    self.gens.component(*arity).act(&beta, &SparseVec::unit(*dec))
                };
                let dims: Vec<usize> = canon.iter().map(Vec::len).collect();
                let mut out = Vec::new();
                for choice in product_tuples(&dims) {
                    let mut coef = Scalar::one();
                    let mut degs = Vec::with_capacity(children.len());
                    let mut ordered = vec![Tree::Leaf(0); children.len()];
                    for (i, &c) in choice.iter().enumerate() {
                        let (tree, x) = &canon[i][c];
                        coef = &coef * x;
                        degs.push(self.tree_degree(tree));
                        ordered[beta.apply(i)] = tree.clone();
                    }
                    if koszul_sign(beta.images(), &degs, self.gens.sign_rule()) {
                        coef = -coef;
                    }
                    for (d, x) in decs.iter() {
                        out.push((Tree::Node { arity: *arity, dec: d, children: ordered.clone() }, &coef * x));
                    }
                }
                out
            }
        }
    }

    /// Grafts `subs[i]` (leaves `0..jᵢ`) at leaf `i` of `t`, with the Koszul sign of
    /// moving the decorations of each `subs[i]` into prefix position.
    fn graft(&self, t: &Tree, subs: &[Tree]) -> (Tree, bool) {
        let mut offsets = Vec::with_capacity(subs.len());
        let mut acc = 0;
        for s in subs {
            offsets.push(acc);
            acc += s.leaves().len();
        }
        let shifted: Vec<Tree> = subs.iter().zip(&offsets).map(|(s, &o)| s.relabel(&|l| l + o)).collect();
        // source order: decorations of t, then of subs[0], subs[1], ...
        let mut t_decs = Vec::new();
        t.decorations(&mut t_decs);
        let sub_decs: Vec<Vec<(usize, usize)>> = subs
            .iter()
            .map(|s| {
                let mut v = Vec::new();
                s.decorations(&mut v);
                v
            })
            .collect();
        let mut degs: Vec<i32> = t_decs.iter().map(|&(a, d)| self.dec_degree(a, d)).collect();
        for sd in &sub_decs {
            degs.extend(sd.iter().map(|&(a, d)| self.dec_degree(a, d)));
        }
        // target positions from a prefix walk of t with the subs spliced in
        let mut dest = vec![0usize; degs.len()];
        let mut sub_start = Vec::with_capacity(subs.len());
        let mut s = t_decs.len();
        for sd in &sub_decs {
            sub_start.push(s);
            s += sd.len();
        }
        let mut pos = 0;
        let mut t_seen = 0;
        fn walk(
            t: &Tree,
            sub_decs: &[Vec<(usize, usize)>],
            sub_start: &[usize],
            dest: &mut [usize],
            pos: &mut usize,
            t_seen: &mut usize,
        ) {
            match t {
                Tree::Leaf(l) => {
                    for k in 0..sub_decs[*l].len() {
                        dest[sub_start[*l] + k] = *pos;
                        *pos += 1;
                    }
                }
                Tree::Node { children, .. } => {
                    dest[*t_seen] = *pos;
                    *t_seen += 1;
                    *pos += 1;
                    for c in children {
                        walk(c, sub_decs, sub_start, dest, pos, t_seen);
                    }
                }
            }
        }
        walk(t, &sub_decs, &sub_start, &mut dest, &mut pos, &mut t_seen);
        let neg = koszul_sign(&dest, &degs, self.gens.sign_rule());
        fn splice(t: &Tree, subs: &[Tree]) -> Tree {
            match t {
                Tree::Leaf(l) => subs[*l].clone(),
                Tree::Node { arity, dec, children } => Tree::Node {
                    arity: *arity,
                    dec: *dec,
                    children: children.iter().map(|c| splice(c, subs)).collect(),
                },
            }
        }
        (splice(t, &shifted), neg)
    }
}

/// `free_operad(gens, N)`, optionally truncated at an internal degree.
///
/// Unary generators are allowed only in positive degrees together with a cap.
pub fn free_operad(gens: &SymmetricSequence, max: usize, degree_cap: Option<i32>) -> Result<FreeOperad> {
    if gens.dim(0) > 0 {
        return Err(Error::Invalid("generators in arity 0 are not supported".into()));
    }
    if gens.dim(1) > 0 {
        let min = gens.component(1).space().min_degree().unwrap_or(1);
        if min <= 0 || degree_cap.is_none() {
            return Err(Error::NonConvergent(
                "unary generators need positive degrees and a degree cap".into(),
            ));
        }
    }
    let gens = if gens.max_arity() < max {
        let mut comps = gens.components().to_vec();
        comps.extend((gens.max_arity() + 1..=max).map(SymGroupModule::zero));
        SymmetricSequence::new(comps, gens.sign_rule())?
    } else {
        gens.truncate_to(max)
    };
    let mut b = Builder { gens: &gens, cap: degree_cap, memo: HashMap::new() };
    let budget = degree_cap.unwrap_or(i32::MAX / 2);
    let mut bases = Vec::with_capacity(max + 1);
    let mut degrees = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let mut trees = if n == 0 { Vec::new() } else { b.trees(n, budget) };
        trees.sort_by_key(|x| x.1);
        degrees.push(trees.iter().map(|t| t.1).collect::<Vec<i32>>());
        bases.push(trees.into_iter().map(|t| t.0).collect::<Vec<Tree>>());
    }
    let index: Vec<HashMap<Tree, usize>> =
        bases.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
    let coords = |n: usize, combo: Vec<(Tree, Scalar)>, neg: bool| {
        SparseVec::from_terms(combo.into_iter().filter_map(|(t, c)| {
            index[n].get(&t).map(|&i| (i, if neg { -c } else { c }))
        }))
    };
    let mut comps = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let g = (0..n.saturating_sub(1))
            .map(|i| {
                let s = Permutation::transposition(n, i);
                let cols = bases[n].iter().map(|t| coords(n, b.canonicalize(&t.relabel(&|l| s.apply(l))), false)).collect();
                Matrix::from_columns(bases[n].len(), cols)
            })
            .collect();
        comps.push(SymGroupModule::new(n, GradedVectorSpace::from_degrees(&degrees[n]), g)?);
    }
    let seq = SymmetricSequence::new(comps, gens.sign_rule())?;
    let unit = index.get(1).and_then(|m| m.get(&Tree::Leaf(0))).map_or(SparseVec::new(), |&i| SparseVec::unit(i));
    let operad = Operad::from_rule("free", seq, unit, |sig, f, gs| {
        let subs: Vec<Tree> = sig.inner.iter().zip(gs).map(|(&j, &g)| bases[j][g].clone()).collect();
        let (t, neg) = b.graft(&bases[sig.outer][f], &subs);
        coords(sig.total(), b.canonicalize(&t), neg)
    })?;
    let _ = b.cap;
    Ok(FreeOperad { operad, gens, bases, index, degree_cap })
}

impl FreeOperad {
    pub fn operad(&self) -> &Operad {
        &self.operad
    }

    pub fn into_operad(self) -> Operad {
        self.operad
    }

    pub fn generators(&self) -> &SymmetricSequence {
        &self.gens
    }

    pub fn degree_cap(&self) -> Option<i32> {
        self.degree_cap
    }

    pub fn basis(&self, n: usize) -> &[Tree] {
        &self.bases[n]
    }

    pub fn index_of(&self, n: usize, t: &Tree) -> Option<usize> {
        self.index[n].get(t).copied()
    }

    /// The corolla `v_dec(1, …, k)` as a basis index of arity `k`.
    pub fn generator(&self, arity: usize, dec: usize) -> Option<usize> {
        let t = Tree::Node { arity, dec, children: (0..arity).map(Tree::Leaf).collect() };
        self.index_of(arity, &t)
    }

    /// The unique morphism to `target` restricting to `phi[k]: gens[k] → target[k]`.
    pub fn extend(&self, target: &Operad, phi: &[Matrix]) -> Result<OperadMorphism> {
        let max = self.operad.max_arity().min(target.max_arity());
        for (k, m) in phi.iter().enumerate() {
            if m.ncols() != self.gens.dim(k) || m.nrows() != target.dim(k) {
                return Err(Error::Invalid(format!("generator map in arity {k} has the wrong shape")));
            }
        }
        let mut components = Vec::with_capacity(max + 1);
        for n in 0..=max {
            let cols = self.bases[n].iter().map(|t| image(t, target, phi)).collect();
            components.push(Matrix::from_columns(target.dim(n), cols));
        }
        OperadMorphism::new(self.operad.clone(), target.clone(), components)
    }
}

/// `Φ(v_d(T₁, …, T_k)) = σ_π · γ(φ(d); Φ(T₁), …, Φ(T_k))`.
fn image(t: &Tree, target: &Operad, phi: &[Matrix]) -> SparseVec {
    match t {
        Tree::Leaf(_) => target.unit().clone(),
        Tree::Node { arity, dec, children } => {
            let f = phi.get(*arity).map_or(SparseVec::new(), |m| m.column(*dec).clone());
            let blocks: Vec<Vec<usize>> = children.iter().map(Tree::leaves).collect();
            let all: Vec<usize> = {
                let mut v: Vec<usize> = blocks.iter().flatten().copied().collect();
                v.sort_unstable();
                v
            };
            let rank = |x: usize| all.binary_search(&x).expect("leaf present");
            let local_blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().map(|&x| rank(x)).collect()).collect();
            let gs: Vec<SparseVec> = children
                .iter()
                .zip(&blocks)
                .map(|(c, b)| image(&c.relabel(&|l| b.binary_search(&l).expect("leaf in block")), target, phi))
                .collect();
            target.compose_on_blocks(&local_blocks, &f, &gs)
        }
    }
}
