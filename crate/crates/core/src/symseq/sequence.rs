use std::sync::Arc;

use crate::exactlin::SignRule;
use crate::symrep::SymGroupModule;
use crate::{Error, Result};

/// Arity-indexed Σₙ-modules `M[0..=N]`.
///
/// `truncated` records that components above `N` are not actually zero; an
/// evaluation then only trusts degrees that no higher arity can reach.
#[derive(Clone, Debug)]
pub struct SymmetricSequence {
    components: Arc<Vec<SymGroupModule>>,
    rule: SignRule,
    unital: bool,
    truncated: bool,
}

impl SymmetricSequence {
    pub fn new(components: Vec<SymGroupModule>, rule: SignRule) -> Result<Self> {
        Self::build(components, rule, false)
    }

    /// A sequence allowed to have a nonzero arity-0 component.
    pub fn new_unital(components: Vec<SymGroupModule>, rule: SignRule) -> Result<Self> {
        Self::build(components, rule, true)
    }

    fn build(components: Vec<SymGroupModule>, rule: SignRule, unital: bool) -> Result<Self> {
        for (n, m) in components.iter().enumerate() {
            if m.arity() != n {
                return Err(Error::Invalid(format!("component {n} has arity {}", m.arity())));
            }
            let report = m.verify_action();
            if let Some(v) = report.first() {
                return Err(Error::Invalid(format!(
                    "component {n} violates relation ({}, {})",
                    v.i, v.relation
                )));
            }
        }
        if !unital && components.first().is_some_and(|m| m.dim() > 0) {
            return Err(Error::Invalid("arity-0 component must vanish unless flagged unital".into()));
        }
        let components = if components.is_empty() { vec![SymGroupModule::zero(0)] } else { components };
        Ok(SymmetricSequence { components: Arc::new(components), rule, unital, truncated: false })
    }

    pub(crate) fn from_parts_unchecked(components: Vec<SymGroupModule>, rule: SignRule) -> Self {
        SymmetricSequence { components: Arc::new(components), rule, unital: false, truncated: false }
    }

    pub fn zero(max_arity: usize, rule: SignRule) -> Self {
        Self::from_parts_unchecked((0..=max_arity).map(SymGroupModule::zero).collect(), rule)
    }

    /// The unit for composition: `K` in arity one.
    pub fn unit(max_arity: usize, rule: SignRule) -> Self {
        let comps = (0..=max_arity)
            .map(|n| if n == 1 { SymGroupModule::trivial(1, 0) } else { SymGroupModule::zero(n) })
            .collect();
        Self::from_parts_unchecked(comps, rule)
    }

    /// Marks the sequence as the arity truncation of an infinite one.
    pub fn mark_truncated(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn sign_rule(&self) -> SignRule {
        self.rule
    }

    pub fn with_sign_rule(&self, rule: SignRule) -> Self {
        SymmetricSequence { rule, ..self.clone() }
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[SymGroupModule] {
        &self.components
    }

    pub fn get(&self, n: usize) -> Option<&SymGroupModule> {
        self.components.get(n).filter(|m| m.dim() > 0)
    }

    pub fn component(&self, n: usize) -> SymGroupModule {
        self.components.get(n).cloned().unwrap_or_else(|| SymGroupModule::zero(n))
    }

    pub fn dim(&self, n: usize) -> usize {
        self.components.get(n).map_or(0, SymGroupModule::dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(SymGroupModule::dim).collect()
    }

    /// Components of arity `<= n` kept, the rest zeroed.
    pub fn truncate_to(&self, n: usize) -> Self {
        let comps = (0..=self.max_arity())
            .map(|k| if k <= n { self.components[k].clone() } else { SymGroupModule::zero(k) })
            .collect();
        SymmetricSequence {
            components: Arc::new(comps),
            truncated: self.truncated && n >= self.max_arity(),
            ..self.clone()
        }
    }

    /// Only the arity-`n` component kept.
    pub fn layer(&self, n: usize) -> Self {
        let comps = (0..=self.max_arity())
            .map(|k| if k == n { self.components[k].clone() } else { SymGroupModule::zero(k) })
            .collect();
        SymmetricSequence { components: Arc::new(comps), truncated: false, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|m| m.dim() == 0)
    }

    /// Smallest internal degree occurring in any component, if any.
    pub fn min_degree(&self) -> Option<i32> {
        self.components.iter().filter_map(|m| m.space().min_degree()).min()
    }
}
