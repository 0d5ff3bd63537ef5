//! Dense univariate polynomials in ascending-degree order.

use std::fmt;

use super::kernel::{self, with_arith};
use super::{AlgebraError, Domain, Scalar};

/// `coeffs[i]` is the coefficient of `x^i`. Canonical: the zero polynomial
/// has no coefficients, otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    domain: Domain,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(domain: &Domain) -> Self {
        Poly {
            domain: domain.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_trusted(c.domain(), vec![c])
    }

    /// Builds from ascending coefficients, checking they all live in `domain`.
    pub fn new(domain: &Domain, coeffs: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if coeffs.iter().any(|c| !c.in_domain(domain)) {
            return Err(AlgebraError::DomainMismatch);
        }
        Ok(Poly::from_trusted(domain.clone(), coeffs))
    }

    pub fn from_i64s(domain: &Domain, coeffs: &[i64]) -> Self {
        Poly::from_trusted(domain.clone(), coeffs.iter().map(|&c| domain.from_i64(c)).collect())
    }

    pub fn from_strings<S: AsRef<str>>(domain: &Domain, coeffs: &[S]) -> Result<Self, AlgebraError> {
        let cs = coeffs
            .iter()
            .map(|s| domain.parse(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_trusted(domain.clone(), cs))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(Scalar::to_repr_string).collect()
    }

    fn from_trusted(domain: Domain, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { domain, coeffs }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.domain.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    fn check(&self, other: &Poly) -> Result<(), AlgebraError> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(AlgebraError::DomainMismatch)
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar, AlgebraError> {
        if !x.in_domain(&self.domain) {
            return Err(AlgebraError::DomainMismatch);
        }
        let mut acc = self.domain.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(Poly::from_trusted(self.domain.clone(), coeffs))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Ok(Poly::from_trusted(self.domain.clone(), coeffs))
    }

    pub fn neg(&self) -> Poly {
        Poly::from_trusted(self.domain.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Result<Poly, AlgebraError> {
        if !c.in_domain(&self.domain) {
            return Err(AlgebraError::DomainMismatch);
        }
        if c.is_zero() {
            return Ok(Poly::zero(&self.domain));
        }
        Ok(Poly::from_trusted(
            self.domain.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        ))
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.domain));
        }
        let out = with_arith!(&self.domain, k => kernel::mul(&k, &self.coeffs, &other.coeffs));
        Ok(Poly::from_trusted(self.domain.clone(), out))
    }

    /// Exact long division: `self = q * den + r` with `deg r < deg den`.
    pub fn divmod(&self, den: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        self.check(den)?;
        let dd = den.degree().ok_or(AlgebraError::ZeroPolynomialDivisor)?;
        let lead_inv = den.coeffs[dd].inv()?;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(&self.domain), self.clone()));
        }
        let (quot, rem) = with_arith!(&self.domain, k => {
            kernel::divmod(&k, &self.coeffs, &den.coeffs, &lead_inv)
        });
        Ok((
            Poly::from_trusted(self.domain.clone(), quot),
            Poly::from_trusted(self.domain.clone(), rem),
        ))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// Monic `prod (x - node)`.
pub fn vanishing_poly(domain: &Domain, nodes: &[Scalar]) -> Result<Poly, AlgebraError> {
    check_nodes(domain, nodes)?;
    let coeffs = with_arith!(domain, k => kernel::vanishing(&k, &domain.one(), nodes));
    Ok(Poly::from_trusted(domain.clone(), coeffs))
}

fn check_nodes(domain: &Domain, nodes: &[Scalar]) -> Result<(), AlgebraError> {
    if nodes.iter().any(|n| !n.in_domain(domain)) {
        return Err(AlgebraError::DomainMismatch);
    }
    let mut seen = std::collections::HashSet::new();
    for n in nodes {
        if !seen.insert(n) {
            return Err(AlgebraError::DuplicateNode(n.to_string()));
        }
    }
    Ok(())
}

/// Unique polynomial of degree `< points.len()` through every point.
pub fn lagrange_interpolate(points: &[(Scalar, Scalar)]) -> Result<Poly, AlgebraError> {
    let first = points.first().ok_or(AlgebraError::EmptyInput)?;
    let domain = first.0.domain();
    let nodes: Vec<Scalar> = points.iter().map(|(x, _)| x.clone()).collect();
    let values: Vec<Scalar> = points.iter().map(|(_, y)| y.clone()).collect();
    if values.iter().any(|y| !y.in_domain(&domain)) {
        return Err(AlgebraError::DomainMismatch);
    }
    let basis = LagrangeBasis::new(&domain, nodes)?;
    Ok(basis.interpolate_many(&[&values]).pop().expect("one value set"))
}

/// Lagrange basis over a fixed node set, shared across many interpolations.
///
/// With `z = prod (x - x_i)` and barycentric weights
/// `w_i = 1 / prod_{k != i} (x_i - x_k)`, the basis polynomial is
/// `L_i = w_i * z / (x - x_i)`.
#[derive(Clone, Debug)]
pub struct LagrangeBasis {
    domain: Domain,
    nodes: Vec<Scalar>,
    weights: Vec<Scalar>,
    vanishing: Poly,
}

impl LagrangeBasis {
    pub fn new(domain: &Domain, nodes: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if nodes.is_empty() {
            return Err(AlgebraError::EmptyInput);
        }
        let vanishing = vanishing_poly(domain, &nodes)?;
        let weights = with_arith!(domain, k => kernel::weights(&k, &domain.one(), &nodes));
        Ok(LagrangeBasis {
            domain: domain.clone(),
            nodes,
            weights,
            vanishing,
        })
    }

    /// Basis over the integer nodes `1..=n`.
    pub fn consecutive(domain: &Domain, n: usize) -> Result<Self, AlgebraError> {
        LagrangeBasis::new(domain, (1..=n as u64).map(|i| domain.from_u64(i)).collect())
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    pub fn vanishing(&self) -> &Poly {
        &self.vanishing
    }

    /// Interpolates several value vectors at once; each must have one entry
    /// per node.
    pub fn interpolate_many(&self, value_sets: &[&[Scalar]]) -> Vec<Poly> {
        let sets = with_arith!(&self.domain, k => {
            kernel::interpolate(&k, &self.nodes, &self.weights, self.vanishing.coeffs(), value_sets)
        });
        sets.into_iter()
            .map(|c| Poly::from_trusted(self.domain.clone(), c))
            .collect()
    }

    pub fn interpolate(&self, values: &[Scalar]) -> Poly {
        self.interpolate_many(&[values]).pop().expect("one value set")
    }

    /// Values `L_i(x)` of every basis polynomial at `x`.
    pub fn eval_basis(&self, x: &Scalar) -> Result<Vec<Scalar>, AlgebraError> {
        if !x.in_domain(&self.domain) {
            return Err(AlgebraError::DomainMismatch);
        }
        if let Some(pos) = self.nodes.iter().position(|n| n == x) {
            return Ok((0..self.nodes.len())
                .map(|i| if i == pos { self.domain.one() } else { self.domain.zero() })
                .collect());
        }
        let zx = self.vanishing.eval(x)?;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(xi, wi)| Ok(&(&zx * wi) * &(x - xi).inv()?))
            .collect()
    }
}
