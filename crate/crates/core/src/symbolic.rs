//! Exact integration of polynomial integrands against `(1 − z·ζ̄)^{−p}`.
//!
//! The kernel is expanded as a finite Neumann sum
//! `Σ_γ C(|γ|+p−1, p−1) · |γ|!/γ! · z^γ ζ̄^γ` and every term is integrated with
//! [`exact_moment`]. Moments vanish unless the ζ and ζ̄ exponents agree, so
//! truncating at the integrand's total ζ-degree plus `p` drops only zero terms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, ExactValue, RationalComplex};
use crate::poly::{Dim, EvalPoint, MultiIndex, PolyObservable};
use crate::quadrature::{exact_moment, DomainKind};

/// A polynomial in the symbolic point `z` and the integration variables `ζ, ζ̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedPoly {
    dim: Dim,
    /// `(z-exponent, ζ-exponent, ζ̄-exponent) → coefficient`
    terms: BTreeMap<(MultiIndex, MultiIndex, MultiIndex), RationalComplex>,
}

impl MixedPoly {
    pub fn zero(dim: Dim) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Lifts `f(ζ)` with no dependence on `z`.
    pub fn from_poly(f: &PolyObservable) -> Self {
        let mut out = Self::zero(f.dim());
        let z0 = MultiIndex::zero(f.dim());
        for (h, a, c) in f.raw_terms() {
            out.add_term(c.clone(), z0, *h, *a);
        }
        out
    }

    pub fn add_term(
        &mut self,
        coeff: RationalComplex,
        z: MultiIndex,
        holo: MultiIndex,
        anti: MultiIndex,
    ) {
        if coeff.is_zero() {
            return;
        }
        let key = (z, holo, anti);
        let merged = match self.terms.remove(&key) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `z·ζ̄ = Σ zⱼ ζ̄ⱼ`.
    pub fn times_z_dot_zetabar(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((z, h, a), c) in &self.terms {
            for axis in 1..=self.dim.n() {
                let e = MultiIndex::unit(self.dim, axis);
                out.add_term(c.clone(), z.add(&e), *h, a.add(&e));
            }
        }
        out
    }

    pub fn max_zeta_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, h, a)| h.total() + a.total())
            .max()
            .unwrap_or(0)
    }
}

/// A holomorphic polynomial in `z` times `π^pi_power`; exact-path results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    poly: PolyObservable,
    pi_power: i32,
}

impl ExactPoly {
    pub fn zero(dim: Dim) -> Self {
        Self {
            poly: PolyObservable::zero(dim),
            pi_power: 0,
        }
    }

    pub fn new(poly: PolyObservable, pi_power: i32) -> Self {
        debug_assert!(poly.is_holomorphic());
        if poly.is_zero() {
            Self::zero(poly.dim())
        } else {
            Self { poly, pi_power }
        }
    }

    /// A rational polynomial (no power of π).
    pub fn rational(poly: PolyObservable) -> Self {
        Self::new(poly, 0)
    }

    pub fn poly(&self) -> &PolyObservable {
        &self.poly
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn dim(&self) -> Dim {
        self.poly.dim()
    }

    /// The polynomial itself when it carries no power of π.
    pub fn into_rational(self) -> Result<PolyObservable> {
        if self.pi_power == 0 {
            Ok(self.poly)
        } else {
            Err(Error::MixedPiPowers(self.pi_power, 0))
        }
    }

    pub fn scale(&self, by: &ExactValue) -> ExactPoly {
        ExactPoly::new(self.poly.scale(by.coeff()), self.pi_power + by.pi_power())
    }

    pub fn add(&self, other: &ExactPoly) -> Result<ExactPoly> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(Error::MixedPiPowers(self.pi_power, other.pi_power));
        }
        Ok(ExactPoly::new(self.poly.add(&other.poly)?, self.pi_power))
    }

    pub fn sub(&self, other: &ExactPoly) -> Result<ExactPoly> {
        self.add(&other.scale(&ExactValue::rational(RationalComplex::from_integer(-1))))
    }

    pub fn eval(&self, z: &EvalPoint) -> Result<Complex64> {
        Ok(self.poly.eval(z)? * std::f64::consts::PI.powi(self.pi_power))
    }
}

/// `C(j+p−1, p−1) · j!/γ!` with `j = |γ|`: the coefficient of `z^γ ζ̄^γ` in
/// `(1 − z·ζ̄)^{−p}`.
pub fn neumann_coefficient(gamma: &MultiIndex, exponent: u32) -> RationalComplex {
    let j = gamma.total();
    if exponent == 0 {
        return if j == 0 {
            RationalComplex::one()
        } else {
            RationalComplex::zero()
        };
    }
    let b = binomial(j + exponent - 1, exponent - 1);
    RationalComplex::real(BigRational::new(b * factorial(j), gamma.factorial()))
}

/// Exact `∫ integrand(z; ζ) · (1 − z·ζ̄)^{−exponent}` over `kind`, as a
/// polynomial in `z`.
pub fn integrate_against_kernel(
    kind: DomainKind,
    integrand: &MixedPoly,
    exponent: u32,
) -> Result<ExactPoly> {
    let dim = kind.dim();
    dim.check(integrand.dim())?;
    let order = integrand.max_zeta_degree() + exponent;
    let mut acc: BTreeMap<MultiIndex, ExactValue> = BTreeMap::new();
    for gamma in MultiIndex::all_up_to(dim, order) {
        let kc = neumann_coefficient(&gamma, exponent);
        if kc.is_zero() {
            continue;
        }
        for ((z, h, a), c) in &integrand.terms {
            let m = exact_moment(kind, h, &a.add(&gamma))?;
            if m.is_zero() {
                continue;
            }
            let v = m.scale(&(c * &kc));
            let slot = acc.entry(z.add(&gamma)).or_default();
            *slot = slot
                .checked_add(&v)
                .ok_or(Error::MixedPiPowers(slot.pi_power(), v.pi_power()))?;
        }
    }
    let mut poly = PolyObservable::zero(dim);
    let mut pi_power: Option<i32> = None;
    let z0 = MultiIndex::zero(dim);
    for (zi, v) in acc {
        if v.is_zero() {
            continue;
        }
        match pi_power {
            None => pi_power = Some(v.pi_power()),
            Some(p) if p != v.pi_power() => return Err(Error::MixedPiPowers(p, v.pi_power())),
            Some(_) => {}
        }
        poly.add_term(v.coeff().clone(), zi, z0);
    }
    Ok(ExactPoly::new(poly, pi_power.unwrap_or(0)))
}
