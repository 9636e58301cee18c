//! Polynomial test functions `f(ζ) = Σ c · ζ^α · ζ̄^β` and evaluation points.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{factorial, RationalComplex};

/// Number of complex variables: the disc lives in ℂ, the ball in ℂ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }

    pub fn from_n(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            other => Err(Error::InvalidArgument(format!(
                "dimension must be 1 or 2, got {other}"
            ))),
        }
    }

    pub(crate) fn check(self, other: Dim) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            })
        }
    }
}

/// Exponent tuple `α = (α₁, …, αₙ)` with `n ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    dim: Dim,
    deg: [u32; 2],
}

impl MultiIndex {
    pub fn new(degrees: &[u32]) -> Result<Self> {
        let dim = Dim::from_n(degrees.len())?;
        let mut deg = [0; 2];
        deg[..degrees.len()].copy_from_slice(degrees);
        Ok(Self { dim, deg })
    }

    pub fn zero(dim: Dim) -> Self {
        Self { dim, deg: [0; 2] }
    }

    /// `e_axis`, with `axis` counted from 1.
    pub fn unit(dim: Dim, axis: usize) -> Self {
        assert!((1..=dim.n()).contains(&axis), "axis {axis} out of range");
        let mut deg = [0; 2];
        deg[axis - 1] = 1;
        Self { dim, deg }
    }

    pub fn one_d(k: u32) -> Self {
        Self {
            dim: Dim::One,
            deg: [k, 0],
        }
    }

    pub fn two_d(a: u32, b: u32) -> Self {
        Self {
            dim: Dim::Two,
            deg: [a, b],
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn degrees(&self) -> &[u32] {
        &self.deg[..self.dim.n()]
    }

    /// Degree along `axis` (1-based).
    pub fn get(&self, axis: usize) -> u32 {
        self.degrees()[axis - 1]
    }

    pub fn total(&self) -> u32 {
        self.degrees().iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// `α! = Π αⱼ!`
    pub fn factorial(&self) -> BigInt {
        self.degrees().iter().map(|&d| factorial(d)).product()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim, other.dim);
        MultiIndex {
            dim: self.dim,
            deg: [self.deg[0] + other.deg[0], self.deg[1] + other.deg[1]],
        }
    }

    /// `self − other` when every entry stays nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.dim, other.dim);
        Some(MultiIndex {
            dim: self.dim,
            deg: [
                self.deg[0].checked_sub(other.deg[0])?,
                self.deg[1].checked_sub(other.deg[1])?,
            ],
        })
    }

    /// All multi-indices of dimension `dim` with total degree `≤ max_total`,
    /// ordered by total degree and then lexicographically.
    pub fn all_up_to(dim: Dim, max_total: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for total in 0..=max_total {
            match dim {
                Dim::One => out.push(MultiIndex::one_d(total)),
                Dim::Two => {
                    for a in (0..=total).rev() {
                        out.push(MultiIndex::two_d(a, total - a));
                    }
                }
            }
        }
        out
    }

    /// `z^α` for a point with matching dimension.
    pub fn pow(&self, coords: &[Complex64]) -> Complex64 {
        self.degrees()
            .iter()
            .zip(coords)
            .map(|(&d, z)| z.powu(d))
            .product()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            Dim::One => write!(f, "{}", self.deg[0]),
            Dim::Two => write!(f, "{} {}", self.deg[0], self.deg[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTerm {
    pub coeff: RationalComplex,
    /// Powers of ζ.
    pub holo: MultiIndex,
    /// Powers of ζ̄.
    pub anti: MultiIndex,
}

impl MonomialTerm {
    pub fn new(coeff: RationalComplex, holo: MultiIndex, anti: MultiIndex) -> Self {
        Self { coeff, holo, anti }
    }
}

/// Which Wirtinger derivative: `∂/∂ζⱼ` or `∂/∂ζ̄ⱼ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wirtinger {
    Holo,
    Anti,
}

/// A polynomial in ζ and ζ̄ with exact coefficients, kept in canonical form:
/// like terms merged, zero coefficients dropped, terms ordered by `(holo, anti)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyObservable {
    dim: Dim,
    terms: BTreeMap<(MultiIndex, MultiIndex), RationalComplex>,
}

impl PolyObservable {
    /// The empty polynomial, which evaluates to zero everywhere.
    pub fn zero(dim: Dim) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: Dim, c: RationalComplex) -> Self {
        let z = MultiIndex::zero(dim);
        Self::monomial(c, z, z)
    }

    pub fn monomial(coeff: RationalComplex, holo: MultiIndex, anti: MultiIndex) -> Self {
        assert_eq!(holo.dim(), anti.dim(), "holo/anti dimension mismatch");
        let mut p = Self::zero(holo.dim());
        p.add_term(coeff, holo, anti);
        p
    }

    /// `ζ^α ζ̄^β` with coefficient one.
    pub fn unit_monomial(holo: MultiIndex, anti: MultiIndex) -> Self {
        Self::monomial(RationalComplex::one(), holo, anti)
    }

    pub fn from_terms(dim: Dim, terms: impl IntoIterator<Item = MonomialTerm>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for t in terms {
            dim.check(t.holo.dim())?;
            dim.check(t.anti.dim())?;
            p.add_term(t.coeff, t.holo, t.anti);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, coeff: RationalComplex, holo: MultiIndex, anti: MultiIndex) {
        debug_assert_eq!(holo.dim(), self.dim);
        debug_assert_eq!(anti.dim(), self.dim);
        if coeff.is_zero() {
            return;
        }
        let key = (holo, anti);
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = MonomialTerm> + '_ {
        self.terms
            .iter()
            .map(|((h, a), c)| MonomialTerm::new(c.clone(), *h, *a))
    }

    pub(crate) fn raw_terms(
        &self,
    ) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &RationalComplex)> + '_ {
        self.terms.iter().map(|((h, a), c)| (h, a, c))
    }

    pub fn coefficient(&self, holo: &MultiIndex, anti: &MultiIndex) -> Option<&RationalComplex> {
        self.terms.get(&(*holo, *anti))
    }

    /// True when no term contains a power of ζ̄.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, a)| a.is_zero())
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(h, a)| h.total() + a.total())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &PolyObservable) -> Result<PolyObservable> {
        self.dim.check(other.dim)?;
        let mut out = self.clone();
        for (h, a, c) in other.raw_terms() {
            out.add_term(c.clone(), *h, *a);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyObservable) -> Result<PolyObservable> {
        self.add(&other.scale(&RationalComplex::from_integer(-1)))
    }

    pub fn scale(&self, by: &RationalComplex) -> PolyObservable {
        let mut out = Self::zero(self.dim);
        for (h, a, c) in self.raw_terms() {
            out.add_term(c * by, *h, *a);
        }
        out
    }

    pub fn mul(&self, other: &PolyObservable) -> Result<PolyObservable> {
        self.dim.check(other.dim)?;
        let mut out = Self::zero(self.dim);
        for (h1, a1, c1) in self.raw_terms() {
            for (h2, a2, c2) in other.raw_terms() {
                out.add_term(c1 * c2, h1.add(h2), a1.add(a2));
            }
        }
        Ok(out)
    }

    /// Exact Wirtinger derivative along `axis` (1-based). ζ and ζ̄ are treated as
    /// independent variables, so `∂/∂ζ̄` of a holomorphic polynomial is the empty
    /// polynomial.
    pub fn differentiate(&self, which: Wirtinger, axis: usize) -> Result<PolyObservable> {
        if !(1..=self.dim.n()).contains(&axis) {
            return Err(Error::DimensionMismatch {
                expected: self.dim.n(),
                found: axis,
            });
        }
        let unit = MultiIndex::unit(self.dim, axis);
        let mut out = Self::zero(self.dim);
        for (h, a, c) in self.raw_terms() {
            let (target, other) = match which {
                Wirtinger::Holo => (h, a),
                Wirtinger::Anti => (a, h),
            };
            let Some(lowered) = target.checked_sub(&unit) else {
                continue;
            };
            let k = RationalComplex::from_integer(i64::from(target.get(axis)));
            let coeff = c * &k;
            match which {
                Wirtinger::Holo => out.add_term(coeff, lowered, *other),
                Wirtinger::Anti => out.add_term(coeff, *other, lowered),
            }
        }
        Ok(out)
    }

    /// `Σ c · z^α · z̄^β` in double precision.
    pub fn eval(&self, p: &EvalPoint) -> Result<Complex64> {
        self.dim.check(p.dim())?;
        Ok(self.compile().eval_coords(p.coords()))
    }

    /// Floating-point copy of the coefficients for hot loops.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .raw_terms()
                .map(|(h, a, c)| (c.to_complex64(), *h, *a))
                .collect(),
        }
    }
}

/// A [`PolyObservable`] with `f64` coefficients, used inside quadrature loops.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Complex64, MultiIndex, MultiIndex)>,
}

impl CompiledPoly {
    pub fn eval_coords(&self, coords: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, h, a) in &self.terms {
            let mut v = *c;
            for (j, z) in coords.iter().enumerate() {
                let (dh, da) = (h.degrees()[j], a.degrees()[j]);
                if dh > 0 {
                    v *= z.powu(dh);
                }
                if da > 0 {
                    v *= z.conj().powu(da);
                }
            }
            acc += v;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Interior,
    Boundary,
}

/// Distance from `Σ|zⱼ|² = 1` accepted for boundary points.
pub const BOUNDARY_TOLERANCE: f64 = 1e-14;

/// A point of the open unit disc/ball or of its boundary circle/sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    dim: Dim,
    coords: [Complex64; 2],
    region: Region,
}

impl EvalPoint {
    fn raw(coords: &[Complex64]) -> Result<(Dim, [Complex64; 2])> {
        let dim = Dim::from_n(coords.len())?;
        let mut c = [Complex64::new(0.0, 0.0); 2];
        c[..coords.len()].copy_from_slice(coords);
        Ok((dim, c))
    }

    pub fn interior(coords: &[Complex64]) -> Result<Self> {
        let (dim, coords) = Self::raw(coords)?;
        let p = Self {
            dim,
            coords,
            region: Region::Interior,
        };
        let norm_sqr = p.norm_sqr();
        if !(norm_sqr < 1.0) {
            return Err(Error::NotInterior { norm_sqr });
        }
        Ok(p)
    }

    pub fn boundary(coords: &[Complex64]) -> Result<Self> {
        let (dim, coords) = Self::raw(coords)?;
        let p = Self {
            dim,
            coords,
            region: Region::Boundary,
        };
        let norm_sqr = p.norm_sqr();
        if !((norm_sqr - 1.0).abs() <= BOUNDARY_TOLERANCE) {
            return Err(Error::NotOnBoundary { norm_sqr });
        }
        Ok(p)
    }

    /// Quadrature nodes satisfy their region invariant by construction.
    pub(crate) fn node(dim: Dim, coords: [Complex64; 2], region: Region) -> Self {
        Self {
            dim,
            coords,
            region,
        }
    }

    pub fn disc(z: Complex64) -> Result<Self> {
        Self::interior(&[z])
    }

    pub fn ball(z1: Complex64, z2: Complex64) -> Result<Self> {
        Self::interior(&[z1, z2])
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords[..self.dim.n()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `z · ζ̄ = Σ zⱼ · conj(ζⱼ)`.
    pub fn dot_conj(&self, zeta: &EvalPoint) -> Complex64 {
        self.coords()
            .iter()
            .zip(zeta.coords())
            .map(|(z, w)| z * w.conj())
            .sum()
    }
}
