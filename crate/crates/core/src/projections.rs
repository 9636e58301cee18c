//! Szegő (boundary) and Bergman (interior) projections of polynomial test
//! functions, by quadrature and by exact moment expansion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{kernel_value, KernelId, ModelDomain};
use crate::poly::{EvalPoint, PolyObservable, Region};
use crate::quadrature::{cached_rule, integrate, Resolution};
use crate::symbolic::{integrate_against_kernel, ExactPoly, MixedPoly};

/// Largest admissible `|z|` for the quadrature path.
pub const MAX_POINT_NORM: f64 = 0.95;

/// Relative tolerance on the rule's total mass before it is used.
const MASS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProjectionValue {
    Numeric(Complex64),
    /// Holomorphic polynomial in `z`.
    Exact(PolyObservable),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    pub value: ProjectionValue,
    pub method: Method,
    pub resolution: Option<Resolution>,
}

impl ProjectionResult {
    pub fn numeric(&self) -> Option<Complex64> {
        match self.value {
            ProjectionValue::Numeric(v) => Some(v),
            ProjectionValue::Exact(_) => None,
        }
    }

    pub fn exact(&self) -> Option<&PolyObservable> {
        match &self.value {
            ProjectionValue::Exact(p) => Some(p),
            ProjectionValue::Numeric(_) => None,
        }
    }

    /// The value at `z`; evaluates the polynomial for oracle results.
    pub fn value_at(&self, z: &EvalPoint) -> Result<Complex64> {
        match &self.value {
            ProjectionValue::Numeric(v) => Ok(*v),
            ProjectionValue::Exact(p) => p.eval(z),
        }
    }
}

pub(crate) fn check_point(domain: ModelDomain, z: &EvalPoint, limit: f64) -> Result<()> {
    domain.dim().check(z.dim())?;
    if z.region() != Region::Interior {
        return Err(Error::NotInterior {
            norm_sqr: z.norm_sqr(),
        });
    }
    let norm = z.norm();
    if norm > limit {
        return Err(Error::PointOutOfRange { norm, limit });
    }
    Ok(())
}

/// `∫ f(ζ) · K(z, ζ)` over the kernel's domain by quadrature.
pub fn apply_kernel(
    kernel: KernelId,
    f: &PolyObservable,
    z: &EvalPoint,
    r: Resolution,
) -> Result<Complex64> {
    kernel.dim().check(f.dim())?;
    kernel.dim().check(z.dim())?;
    let rule = cached_rule(kernel.domain(), r);
    rule.check_mass(MASS_TOLERANCE)?;
    let spec = kernel.spec();
    let c = spec.constant.to_complex64().re;
    let f = f.compile();
    integrate(&rule, |zeta| {
        f.eval_coords(zeta.coords()) * kernel_value(c, spec.exponent, z.dot_conj(zeta))
    })
}

fn quadrature_result(value: Complex64, r: Resolution) -> ProjectionResult {
    ProjectionResult {
        value: ProjectionValue::Numeric(value),
        method: Method::Quadrature,
        resolution: Some(r),
    }
}

/// Szegő projection `∫_∂Ω f·S(z,·) dσ` on the circle or the 3-sphere.
pub fn szego_apply(
    domain: ModelDomain,
    f: &PolyObservable,
    z: &EvalPoint,
    r: Resolution,
) -> Result<ProjectionResult> {
    check_point(domain, z, MAX_POINT_NORM)?;
    apply_kernel(domain.szego(), f, z, r).map(|v| quadrature_result(v, r))
}

/// Bergman projection `∫_Ω f·K(z,·) dV` on the disc or the 4-ball.
pub fn bergman_apply(
    domain: ModelDomain,
    f: &PolyObservable,
    z: &EvalPoint,
    r: Resolution,
) -> Result<ProjectionResult> {
    check_point(domain, z, MAX_POINT_NORM)?;
    apply_kernel(domain.bergman(), f, z, r).map(|v| quadrature_result(v, r))
}

/// Exact `∫ f·K(z,·)` as a polynomial in `z`, from moments.
pub fn kernel_oracle(kernel: KernelId, f: &PolyObservable) -> Result<ExactPoly> {
    kernel.dim().check(f.dim())?;
    let spec = kernel.spec();
    Ok(
        integrate_against_kernel(kernel.domain(), &MixedPoly::from_poly(f), spec.exponent)?
            .scale(&spec.constant),
    )
}

/// Exact Szegő projection. On the disc `ζ^k ζ̄^m ↦ z^{k−m}` for `k ≥ m`; on the
/// ball `ζ^α ζ̄^β ↦ α!(|α−β|+1)! / ((α−β)!(|α|+1)!) · z^{α−β}` for `α ≥ β`.
pub fn szego_oracle(domain: ModelDomain, f: &PolyObservable) -> Result<PolyObservable> {
    kernel_oracle(domain.szego(), f)?.into_rational()
}

/// Exact Bergman projection. On the disc `ζ^k ζ̄^m ↦ (k−m+1)/(k+1) · z^{k−m}`
/// for `k ≥ m`.
pub fn bergman_oracle(domain: ModelDomain, f: &PolyObservable) -> Result<PolyObservable> {
    kernel_oracle(domain.bergman(), f)?.into_rational()
}

pub fn oracle_result(poly: PolyObservable) -> ProjectionResult {
    ProjectionResult {
        value: ProjectionValue::Exact(poly),
        method: Method::Oracle,
        resolution: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_poly;
    use crate::poly::Dim;

    fn p1(s: &str) -> PolyObservable {
        parse_poly(s, Dim::One).unwrap()
    }

    fn p2(s: &str) -> PolyObservable {
        parse_poly(s, Dim::Two).unwrap()
    }

    fn disc(re: f64, im: f64) -> EvalPoint {
        EvalPoint::disc(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn szego_disc_examples() {
        let r = Resolution::disc_default();
        for z in [disc(0.0, 0.0), disc(0.3, -0.4), disc(-0.7, 0.1)] {
            let one = szego_apply(ModelDomain::Disc, &p1("1"), &z, r).unwrap();
            assert!((one.numeric().unwrap() - 1.0).norm() < 1e-13);
            let bar = szego_apply(ModelDomain::Disc, &p1("zb^1"), &z, r).unwrap();
            assert!(bar.numeric().unwrap().norm() < 1e-13);
            let modulus = szego_apply(ModelDomain::Disc, &p1("z^1 zb^1"), &z, r).unwrap();
            assert!((modulus.numeric().unwrap() - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn bergman_disc_examples() {
        let r = Resolution::disc_default();
        let z = disc(0.35, 0.2);
        for k in 0..6 {
            let f = parse_poly(&format!("z^{k}"), Dim::One).unwrap();
            let v = bergman_apply(ModelDomain::Disc, &f, &z, r).unwrap();
            assert!((v.numeric().unwrap() - z.coords()[0].powu(k)).norm() < 1e-12);
        }
        let v = bergman_apply(ModelDomain::Disc, &p1("z^1 zb^1"), &z, r).unwrap();
        assert!((v.numeric().unwrap() - 0.5).norm() < 1e-12);
    }

    #[test]
    fn ball_bergman_of_mixed_monomial() {
        let z = EvalPoint::ball(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.25)).unwrap();
        let f = p2("z1^1 z2^1 zb2^1");
        let v = bergman_apply(ModelDomain::Ball2, &f, &z, Resolution::ball_default()).unwrap();
        assert!((v.numeric().unwrap() - z.coords()[0] / 4.0).norm() < 1e-9);
        assert_eq!(bergman_oracle(ModelDomain::Ball2, &f).unwrap(), p2("1/4 z1^1"));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(szego_oracle(ModelDomain::Disc, &p1("z^5 zb^2")).unwrap(), p1("z^3"));
        assert!(szego_oracle(ModelDomain::Disc, &p1("zb^3")).unwrap().is_zero());
        assert_eq!(
            szego_oracle(ModelDomain::Ball2, &p2("z1^1 z2^1 zb2^1")).unwrap(),
            p2("1/3 z1^1")
        );
        assert_eq!(bergman_oracle(ModelDomain::Disc, &p1("z^4")).unwrap(), p1("z^4"));
        assert_eq!(bergman_oracle(ModelDomain::Disc, &p1("z^2 zb^1")).unwrap(), p1("2/3 z^1"));
        assert_eq!(bergman_oracle(ModelDomain::Disc, &p1("z^1 zb^1")).unwrap(), p1("1/2"));
    }

    #[test]
    fn projections_disagree_off_the_holomorphic_subspace() {
        let f = p1("z^1 zb^1");
        assert_eq!(szego_oracle(ModelDomain::Disc, &f).unwrap(), p1("1"));
        assert_eq!(bergman_oracle(ModelDomain::Disc, &f).unwrap(), p1("1/2"));
    }

    #[test]
    fn point_preconditions() {
        let r = Resolution::disc_default();
        let far = disc(0.96, 0.0);
        assert!(matches!(
            szego_apply(ModelDomain::Disc, &p1("1"), &far, r),
            Err(Error::PointOutOfRange { .. })
        ));
        let z = disc(0.1, 0.0);
        assert!(matches!(
            bergman_apply(ModelDomain::Ball2, &p2("1"), &z, r),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
