//! Fischer pairing, adjoint differentiation, and division chains.
//!
//! The pairing here is the apolar product <z^m zb^n, z^p zb^q> = m! n! when
//! the exponents match (zero otherwise), conjugate-linear in its second
//! slot. It is chosen so that multiplication by a polynomial p and the
//! differential operator [`adjoint_apply`] are exact adjoints. Invariants:
//!
//! - [`fischer_decompose`] returns the unique (S, T) with q = S p + T and
//!   the adjoint of p annihilating T
//! - chain levels reconstruct their input exactly at every step
//! - a residual is all-zero iff its input passes every pure-coefficient
//!   normalization along the chain

use crate::error::{Error, Result};
use crate::poly::{factorial, falling, BiPoly};
use crate::scalar::ExactScalar;
use crate::solve::{Prepared, SolveOutcome};
use num::BigRational;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

/// Apolar inner product, conjugate-linear in `b`.
pub fn fischer_inner(a: &BiPoly, b: &BiPoly) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (&(m, n), ca) in a.terms() {
        let cb = b.coeff(m, n);
        if cb.is_zero() {
            continue;
        }
        let w = BigRational::from_integer(factorial(m) * factorial(n));
        acc = &acc + &(ca * cb.conj()).scale_rat(&w);
    }
    acc
}

/// Applies the adjoint of multiplication by `p`: the differential operator
/// sum conj(p_{m,n}) d^{m+n} / dz^m dzb^n.
pub fn adjoint_apply(p: &BiPoly, q: &BiPoly) -> Result<BiPoly> {
    if p.is_zero() {
        return Ok(BiPoly::zero());
    }
    if p.homogeneous_degree().is_none() {
        return Err(Error::NotHomogeneous);
    }
    let mut out = BiPoly::zero();
    for (&(m, n), cp) in p.terms() {
        let cpc = cp.conj();
        for (&(a, b), cq) in q.terms() {
            if a < m || b < n {
                continue;
            }
            let w = BigRational::from_integer(falling(a, m) * falling(b, n));
            out.add_to_coeff(a - m, b - n, &(&cpc * cq).scale_rat(&w));
        }
    }
    Ok(out)
}

/// Result of dividing with remainder against the Fischer pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FischerSplit {
    /// S in q = S p + T.
    pub quotient: BiPoly,
    /// T, annihilated by the adjoint of p.
    pub remainder: BiPoly,
}

fn check_decompose_inputs(p: &BiPoly, q: &BiPoly) -> Result<(u32, u32)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let n = q.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if n < k {
        return Err(Error::DegreeOutOfRange(format!(
            "cannot divide degree {} by degree {}",
            n, k
        )));
    }
    Ok((k, n))
}

/// Assembles the coefficient-matching system for quotients of degree n - k.
///
/// Unknowns are the coefficients of S over monomials z^u zb^{d-u}; equations
/// match the coefficients of adjoint(p, S p). The matrix is the Gram matrix
/// of multiplication by p restricted to degree d (up to row scaling), hence
/// invertible whenever p is nonzero.
fn decompose_system(p: &BiPoly, k: u32, n: u32) -> Prepared<ExactScalar> {
    let d = n - k;
    let dim = (d + 1) as usize;
    let mut matrix = vec![vec![ExactScalar::zero(); dim]; dim];
    for c in 0..dim {
        let basis = BiPoly::monomial(c as u32, d - c as u32, ExactScalar::one());
        let image = adjoint_apply(p, &(&basis * p)).expect("p is homogeneous");
        for r in 0..dim {
            matrix[r][c] = image.coeff(r as u32, d - r as u32);
        }
    }
    Prepared::new(matrix)
}

fn decompose_with(
    system: &Prepared<ExactScalar>,
    p: &BiPoly,
    q: &BiPoly,
    k: u32,
    n: u32,
) -> Result<FischerSplit> {
    let d = n - k;
    let dim = (d + 1) as usize;
    let rhs_poly = adjoint_apply(p, q)?;
    let rhs: Vec<ExactScalar> = (0..dim)
        .map(|r| rhs_poly.coeff(r as u32, d - r as u32))
        .collect();
    let x = match system.solve(&rhs) {
        SolveOutcome::Unique(x) => x,
        other => {
            return Err(Error::DegreeSystemInconsistent {
                degree: n,
                detail: format!("division system not uniquely solvable: {:?}", other),
            })
        }
    };
    let quotient = BiPoly::from_terms(
        x.into_iter()
            .enumerate()
            .map(|(u, c)| ((u as u32, d - u as u32), c)),
    );
    let remainder = q - &(&quotient * p);
    debug_assert!(adjoint_apply(p, &remainder).unwrap().is_zero());
    Ok(FischerSplit {
        quotient,
        remainder,
    })
}

/// Unique splitting q = S p + T with the adjoint of p annihilating T.
pub fn fischer_decompose(p: &BiPoly, q: &BiPoly) -> Result<FischerSplit> {
    let (k, n) = check_decompose_inputs(p, q)?;
    let system = decompose_system(p, k, n);
    decompose_with(&system, p, q, k, n)
}

/// Iterated quotients: S_0 = q and S_j = S_{j+1} p + T_{j+1} at each level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    degree: u32,
    step: u32,
    /// S_0 .. S_J, degrees descending by `step`.
    quotients: Vec<BiPoly>,
    /// T_1 .. T_J; T_{j+1} pairs with quotients[j] and quotients[j+1].
    remainders: Vec<BiPoly>,
}

impl ChainDecomposition {
    /// Degree of the chain's input.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree drop per level (the divisor's degree).
    pub fn step(&self) -> u32 {
        self.step
    }

    /// Number of levels J + 1, where J = floor(degree / step).
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    /// True only for a chain over the zero polynomial (never constructed here).
    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// The j-th iterated quotient S_j.
    pub fn quotient(&self, j: usize) -> &BiPoly {
        &self.quotients[j]
    }

    /// The remainder T_j for j in 1..=J.
    pub fn remainder(&self, j: usize) -> &BiPoly {
        &self.remainders[j - 1]
    }

    /// Checks S_j = S_{j+1} p + T_{j+1} at every level.
    pub fn reconstructs_against(&self, p: &BiPoly) -> bool {
        (0..self.quotients.len() - 1).all(|j| {
            let rebuilt = &(&self.quotients[j + 1] * p) + &self.remainders[j];
            rebuilt == self.quotients[j]
        })
    }
}

fn chain_with(
    ctx: Option<&FischerContext>,
    p: &BiPoly,
    q: &BiPoly,
    k: u32,
    n: u32,
) -> Result<ChainDecomposition> {
    let mut quotients = vec![q.clone()];
    let mut remainders = Vec::new();
    let mut current = q.clone();
    let mut degree = n;
    while degree >= k {
        let split = match ctx {
            Some(ctx) => ctx.decompose_prepared(&current, degree)?,
            None => {
                let system = decompose_system(p, k, degree);
                decompose_with(&system, p, &current, k, degree)?
            }
        };
        current = split.quotient;
        degree -= k;
        quotients.push(current.clone());
        remainders.push(split.remainder);
    }
    Ok(ChainDecomposition {
        degree: n,
        step: k,
        quotients,
        remainders,
    })
}

/// Runs the full division chain on a homogeneous input.
pub fn iterated_chain(p: &BiPoly, q: &BiPoly) -> Result<ChainDecomposition> {
    let (k, n) = check_chain_inputs(p, q)?;
    chain_with(None, p, q, k, n)
}

fn check_chain_inputs(p: &BiPoly, q: &BiPoly) -> Result<(u32, u32)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let n = q.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    Ok((k, n))
}

/// The designated pure coefficients along a division chain.
///
/// Membership in the degree-n normalization space is equivalent to every
/// entry vanishing. The z-pure list runs over levels 0..=J; the zbar-pure
/// list starts at level 1, which is what leaves the topmost zbar-pure
/// coefficient unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnResidual {
    degree: u32,
    step: u32,
    z_pure: Vec<ExactScalar>,
    zbar_pure: Vec<ExactScalar>,
}

impl SnResidual {
    /// Degree of the polynomial the residual was taken from.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient of z^{degree - j*step} in S_j, for j = 0..=J.
    pub fn z_pure(&self) -> &[ExactScalar] {
        &self.z_pure
    }

    /// Coefficient of zbar^{degree - j*step} in S_j, for j = 1..=J.
    pub fn zbar_pure(&self) -> &[ExactScalar] {
        &self.zbar_pure
    }

    /// All entries, z-pure list first.
    pub fn values(&self) -> Vec<ExactScalar> {
        self.z_pure
            .iter()
            .chain(self.zbar_pure.iter())
            .cloned()
            .collect()
    }

    /// True iff the input lies in the normalization space.
    pub fn is_zero(&self) -> bool {
        self.z_pure.iter().all(ExactScalar::is_zero)
            && self.zbar_pure.iter().all(ExactScalar::is_zero)
    }

    /// The residual of the zero polynomial at the given degree and step:
    /// the correctly shaped all-zero entry lists.
    pub fn trivial(degree: u32, step: u32) -> SnResidual {
        let levels = (degree / step) as usize + 1;
        SnResidual {
            degree,
            step,
            z_pure: vec![ExactScalar::zero(); levels],
            zbar_pure: vec![ExactScalar::zero(); levels - 1],
        }
    }
}

fn residual_from_chain(chain: &ChainDecomposition) -> SnResidual {
    let n = chain.degree();
    let k = chain.step();
    let levels = chain.len();
    let z_pure = (0..levels)
        .map(|j| chain.quotient(j).coeff(n - j as u32 * k, 0))
        .collect();
    let zbar_pure = (1..levels)
        .map(|j| chain.quotient(j).coeff(0, n - j as u32 * k))
        .collect();
    SnResidual {
        degree: n,
        step: k,
        z_pure,
        zbar_pure,
    }
}

/// Extracts the normalization residual of a homogeneous polynomial.
pub fn sn_residual(p: &BiPoly, q: &BiPoly) -> Result<SnResidual> {
    let (k, n) = check_chain_inputs(p, q)?;
    if n < k + 1 {
        return Err(Error::DegreeOutOfRange(format!(
            "residual needs degree at least {}, got {}",
            k + 1,
            n
        )));
    }
    Ok(residual_from_chain(&chain_with(None, p, q, k, n)?))
}

/// Chain engine that reuses one elimination per degree.
///
/// Division systems depend only on the divisor and the input degree, so a
/// long normalization run against a fixed model solves each degree's system
/// once and replays the stored transform for every new right-hand side.
pub struct FischerContext {
    p: BiPoly,
    step: u32,
    systems: RefCell<BTreeMap<u32, Rc<Prepared<ExactScalar>>>>,
}

impl FischerContext {
    /// Builds a context for a nonzero homogeneous divisor.
    pub fn new(p: BiPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let step = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
        Ok(FischerContext {
            p,
            step,
            systems: RefCell::new(BTreeMap::new()),
        })
    }

    /// The divisor.
    pub fn divisor(&self) -> &BiPoly {
        &self.p
    }

    fn system_for(&self, n: u32) -> Rc<Prepared<ExactScalar>> {
        let mut cache = self.systems.borrow_mut();
        cache
            .entry(n)
            .or_insert_with(|| Rc::new(decompose_system(&self.p, self.step, n)))
            .clone()
    }

    fn decompose_prepared(&self, q: &BiPoly, n: u32) -> Result<FischerSplit> {
        let system = self.system_for(n);
        decompose_with(&system, &self.p, q, self.step, n)
    }

    /// Cached-system variant of [`fischer_decompose`].
    pub fn decompose(&self, q: &BiPoly) -> Result<FischerSplit> {
        let (_, n) = check_decompose_inputs(&self.p, q)?;
        self.decompose_prepared(q, n)
    }

    /// Cached-system variant of [`iterated_chain`].
    pub fn chain(&self, q: &BiPoly) -> Result<ChainDecomposition> {
        let (k, n) = check_chain_inputs(&self.p, q)?;
        chain_with(Some(self), &self.p, q, k, n)
    }

    /// Cached-system variant of [`sn_residual`].
    pub fn residual(&self, q: &BiPoly) -> Result<SnResidual> {
        let (k, n) = check_chain_inputs(&self.p, q)?;
        if n < k + 1 {
            return Err(Error::DegreeOutOfRange(format!(
                "residual needs degree at least {}, got {}",
                k + 1,
                n
            )));
        }
        Ok(residual_from_chain(&chain_with(Some(self), &self.p, q, k, n)?))
    }
}
