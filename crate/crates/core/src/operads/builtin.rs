use crate::exactlin::{Matrix, SignRule, SparseVec};
use crate::symrep::{check_arity, Permutation, SymGroupModule, DEFAULT_ARITY_CAP};
use crate::symseq::SymmetricSequence;
use crate::{Error, Result};

use super::operad::{Operad, OperadMorphism};
use super::poisson::{lie_model, poisson_model};

/// The commutative operad: `Com(n) = K` with trivial action.
pub fn com(max: usize, rule: SignRule) -> Result<Operad> {
    check_arity(max, DEFAULT_ARITY_CAP)?;
    let mut comps = vec![SymGroupModule::zero(0)];
    comps.extend((1..=max).map(|n| SymGroupModule::trivial(n, 0)));
    let seq = SymmetricSequence::new(comps, rule)?;
    Operad::from_rule("com", seq, SparseVec::unit(0), |_, _, _| SparseVec::unit(0))
}

/// The associative operad: regular representations, `γ` by substituting words.
///
/// The basis vector with lexicographic rank `r` is the word `x_{τ(1)} … x_{τ(n)}`
/// for the `r`-th permutation `τ`.
pub fn assoc(max: usize, rule: SignRule) -> Result<Operad> {
    check_arity(max, DEFAULT_ARITY_CAP)?;
    let mut comps = vec![SymGroupModule::zero(0)];
    comps.extend((1..=max).map(|n| SymGroupModule::regular(n, 0)));
    let seq = SymmetricSequence::new(comps, rule)?;
    let perms: Vec<Vec<Permutation>> = (0..=max).map(Permutation::all).collect();
    Operad::from_rule("assoc", seq, SparseVec::unit(0), |sig, f, gs| {
        let tau = &perms[sig.outer][f];
        let mut offsets = Vec::with_capacity(sig.outer);
        let mut acc = 0;
        for &j in &sig.inner {
            offsets.push(acc);
            acc += j;
        }
        let mut word = Vec::with_capacity(acc);
        for &letter in tau.images() {
            let g = &perms[sig.inner[letter]][gs[letter]];
            word.extend(g.images().iter().map(|&x| offsets[letter] + x));
        }
        SparseVec::unit(Permutation::new(word).expect("substituted word").lex_rank())
    })
}

/// The Lie operad in the Lyndon-bracket basis.
pub fn lie(max: usize, rule: SignRule) -> Result<Operad> {
    check_arity(max, DEFAULT_ARITY_CAP)?;
    lie_model(rule, max).operad("lie", max)
}

/// The `n`-Poisson operad: graded commutative product and a bracket of degree `n − 1`.
pub fn poisson(n: i32, max: usize, rule: SignRule) -> Result<Operad> {
    check_arity(max, DEFAULT_ARITY_CAP)?;
    poisson_model(n, rule, max)?.operad(&format!("poisson({n})"), max)
}

/// Looks up `com`, `assoc`, `lie` or `poisson(n)`.
pub fn builtin_operad(name: &str, max: usize, rule: SignRule) -> Result<Operad> {
    let lower = name.trim().to_ascii_lowercase();
    match lower.as_str() {
        "com" => com(max, rule),
        "assoc" => assoc(max, rule),
        "lie" => lie(max, rule),
        _ => {
            let n = lower
                .strip_prefix("poisson(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.trim().parse::<i32>().ok())
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            poisson(n, max, rule)
        }
    }
}

/// `Lie → Assoc` sending a bracket to the commutator.
pub fn lie_to_assoc(max: usize, rule: SignRule) -> Result<OperadMorphism> {
    let model = lie_model(rule, max);
    let (l, a) = (lie(max, rule)?, assoc(max, rule)?);
    let components = (0..=max)
        .map(|n| {
            let cols = (0..l.dim(n))
                .map(|b| {
                    SparseVec::from_terms(model.lie_words(n, b).into_iter().map(|(w, c)| {
                        let p = Permutation::new(w.iter().map(|&x| x as usize).collect()).expect("multilinear word");
                        (p.lex_rank(), c)
                    }))
                })
                .collect();
            Matrix::from_columns(a.dim(n), cols)
        })
        .collect();
    OperadMorphism::new(l, a, components)
}
