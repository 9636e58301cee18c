//! Integration of 3-forms over the unit sphere `S³ ⊂ ℂ²` by pulling back to
//! the parametrization `ζ₁ = cos φ·e^{iθ₁}`, `ζ₂ = sin φ·e^{iθ₂}`,
//! `φ ∈ [0, π/2]`, `θ₁, θ₂ ∈ [0, 2π)`.
//!
//! Used to measure the mass of the surface form built from
//! `ζ₁ dζ₂∧dζ̄₁∧dζ̄₂` and its relatives against the geometric measure of `S³`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::RationalComplex;
use crate::grammar::parse_poly;
use crate::poly::{Dim, PolyObservable};
use crate::quadrature::{exact_moment, gauss_legendre, DomainKind, Resolution};
use crate::stokes::Differential;

/// `(φ, θ₁, θ₂)` is negatively oriented relative to the outward-normal
/// orientation of `S³` as the boundary of the ball.
pub const PARAMETRIZATION_ORIENTATION: f64 = -1.0;

/// `scale · coordinate · wedge[0]∧wedge[1]∧wedge[2]`
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeFormTerm {
    pub scale: RationalComplex,
    pub coordinate: Differential,
    pub wedge: [Differential; 3],
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SurfaceForm {
    pub terms: Vec<ThreeFormTerm>,
}

impl SurfaceForm {
    /// `(1/16)[ζ₁ dζ₂∧dζ̄₁∧dζ̄₂ − ζ₂ dζ₁∧dζ̄₁∧dζ̄₂ + ζ̄₁ dζ̄₂∧dζ₁∧dζ₂ − ζ̄₂ dζ̄₁∧dζ₁∧dζ₂]`,
    /// the form whose constant the ball Stokes computation relies on.
    pub fn stokes_sphere_form() -> Self {
        use Differential::{Anti, Holo};
        let plus = RationalComplex::ratio(1, 16);
        let minus = RationalComplex::ratio(-1, 16);
        let term = |scale: &RationalComplex, coordinate, wedge| ThreeFormTerm {
            scale: scale.clone(),
            coordinate,
            wedge,
        };
        Self {
            terms: vec![
                term(&plus, Holo(1), [Holo(2), Anti(1), Anti(2)]),
                term(&minus, Holo(2), [Holo(1), Anti(1), Anti(2)]),
                term(&plus, Anti(1), [Anti(2), Holo(1), Holo(2)]),
                term(&minus, Anti(2), [Anti(1), Holo(1), Holo(2)]),
            ],
        }
    }

    pub fn scaled(&self, by: &RationalComplex) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| ThreeFormTerm {
                    scale: &t.scale * by,
                    ..t.clone()
                })
                .collect(),
        }
    }
}

fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `∫_{S³} g · form` with `S³` oriented as the boundary of the ball. Gauss–
/// Legendre with `n_radial` points in `φ`, `n_theta` uniform points in each angle.
pub fn integrate_form_over_sphere(
    form: &SurfaceForm,
    g: &PolyObservable,
    r: Resolution,
) -> Result<Complex64> {
    Dim::Two.check(g.dim())?;
    for t in &form.terms {
        for d in std::iter::once(&t.coordinate).chain(&t.wedge) {
            let (Differential::Holo(j) | Differential::Anti(j)) = *d;
            if !(1..=2).contains(&j) {
                return Err(Error::InvalidArgument(format!("axis {j} out of range")));
            }
        }
    }
    let g = g.compile();
    let terms: Vec<(Complex64, Differential, [Differential; 3])> = form
        .terms
        .iter()
        .map(|t| (t.scale.to_complex64(), t.coordinate, t.wedge))
        .collect();
    let (x, w) = gauss_legendre(r.n_radial());
    let n = r.n_theta();
    let angle_weight = (2.0 * PI / n as f64).powi(2);
    let mut total = Complex64::new(0.0, 0.0);
    let mut index = 0usize;
    for (xi, wi) in x.iter().zip(&w) {
        // φ = π/4 (x + 1)
        let phi = 0.25 * PI * (xi + 1.0);
        let wphi = 0.25 * PI * wi;
        let (s, c) = phi.sin_cos();
        for j1 in 0..n {
            let e1 = Complex64::from_polar(1.0, 2.0 * PI * j1 as f64 / n as f64);
            for j2 in 0..n {
                let e2 = Complex64::from_polar(1.0, 2.0 * PI * j2 as f64 / n as f64);
                let z1 = e1 * c;
                let z2 = e2 * s;
                let i = Complex64::i();
                let zero = Complex64::new(0.0, 0.0);
                // rows of ∂/∂(φ, θ₁, θ₂)
                let row = |d: Differential| match d {
                    Differential::Holo(1) => [-e1 * s, i * z1, zero],
                    Differential::Anti(1) => [-e1.conj() * s, -i * z1.conj(), zero],
                    Differential::Holo(_) => [e2 * c, zero, i * z2],
                    Differential::Anti(_) => [e2.conj() * c, zero, -i * z2.conj()],
                };
                let coord = |d: Differential| match d {
                    Differential::Holo(1) => z1,
                    Differential::Anti(1) => z1.conj(),
                    Differential::Holo(_) => z2,
                    Differential::Anti(_) => z2.conj(),
                };
                let mut density = zero;
                for (scale, coordinate, wedge) in &terms {
                    let m = [row(wedge[0]), row(wedge[1]), row(wedge[2])];
                    density += scale * coord(*coordinate) * det3(m);
                }
                let v = g.eval_coords(&[z1, z2]) * density * PARAMETRIZATION_ORIENTATION;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite {
                        index,
                        value: v.to_string(),
                    });
                }
                total += v * (wphi * angle_weight);
                index += 1;
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditRow {
    pub integrand: PolyObservable,
    /// `∫ integrand · form`
    pub form_integral: Complex64,
    /// `∫ integrand dσ` with the geometric measure of `S³`, exactly.
    pub geometric_integral: Complex64,
}

impl AuditRow {
    /// `form_integral / geometric_integral`; NaN when the latter is zero.
    pub fn ratio(&self) -> f64 {
        if self.geometric_integral.norm() == 0.0 {
            f64::NAN
        } else {
            (self.form_integral / self.geometric_integral).re
        }
    }
}

fn geometric_integral(g: &PolyObservable) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for t in g.terms() {
        let m = exact_moment(DomainKind::Sphere3, &t.holo, &t.anti)?;
        total += t.coeff.to_complex64() * m.to_complex64();
    }
    Ok(total)
}

/// Integrates `form` against `1`, `|ζ₁|²` and `0`.
pub fn measure_audit(form: &SurfaceForm, r: Resolution) -> Result<Vec<AuditRow>> {
    ["1", "z1^1 zb1^1", "0"]
        .iter()
        .map(|s| {
            let integrand = parse_poly(s, Dim::Two)?;
            Ok(AuditRow {
                form_integral: integrate_form_over_sphere(form, &integrand, r)?,
                geometric_integral: geometric_integral(&integrand)?,
                integrand,
            })
        })
        .collect()
}
