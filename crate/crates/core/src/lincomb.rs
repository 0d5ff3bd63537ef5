//! Sparse linear combinations over wires. Constants ride on wire 0 (`one`).

use std::collections::BTreeMap;

use crate::algebra::{Domain, Scalar};

/// Map from wire index to nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombination(BTreeMap<usize, Scalar>);

impl LinearCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn wire(index: usize, domain: &Domain) -> Self {
        let mut lc = Self::new();
        lc.add_term(index, domain.one());
        lc
    }

    pub fn constant(c: Scalar) -> Self {
        let mut lc = Self::new();
        lc.add_term(0, c);
        lc
    }

    pub fn add_term(&mut self, index: usize, coeff: Scalar) {
        let merged = match self.0.remove(&index) {
            Some(prev) => &prev + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.0.insert(index, merged);
        }
    }

    pub fn with_term(mut self, index: usize, coeff: Scalar) -> Self {
        self.add_term(index, coeff);
        self
    }

    pub fn plus(&self, other: &LinearCombination) -> Self {
        let mut out = self.clone();
        for (&i, c) in &other.0 {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn minus(&self, other: &LinearCombination) -> Self {
        let mut out = self.clone();
        for (&i, c) in &other.0 {
            out.add_term(i, -c);
        }
        out
    }

    pub fn scaled(&self, k: &Scalar) -> Self {
        let mut out = Self::new();
        for (&i, c) in &self.0 {
            out.add_term(i, c * k);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.0.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn max_wire(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// Dot product with a full assignment. Panics if a wire is out of range.
    pub fn eval(&self, assignment: &[Scalar], domain: &Domain) -> Scalar {
        self.0
            .iter()
            .fold(domain.zero(), |acc, (&i, c)| &acc + &(c * &assignment[i]))
    }

    pub fn to_dense(&self, len: usize, domain: &Domain) -> Vec<Scalar> {
        let mut out = vec![domain.zero(); len];
        for (&i, c) in &self.0 {
            out[i] = c.clone();
        }
        out
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        let mut lc = Self::new();
        for (i, c) in values.iter().enumerate() {
            lc.add_term(i, c.clone());
        }
        lc
    }

    /// Keys are decimal wire indices, values serialized scalars.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.0
            .iter()
            .map(|(i, c)| (i.to_string(), c.to_repr_string()))
            .collect()
    }

    pub fn from_json_map(
        map: &BTreeMap<String, String>,
        domain: &Domain,
    ) -> Result<Self, crate::algebra::AlgebraError> {
        let mut lc = Self::new();
        for (k, v) in map {
            let i = k
                .parse::<usize>()
                .map_err(|_| crate::algebra::AlgebraError::ParseScalar(k.clone()))?;
            lc.add_term(i, domain.parse(v)?);
        }
        Ok(lc)
    }
}
