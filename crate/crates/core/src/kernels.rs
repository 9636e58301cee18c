//! Closed-form Szegő and Bergman kernels of the unit disc and the unit ball in ℂ².
//!
//! Every kernel has the shape `constant · (1 − z·ζ̄)^{−p}`:
//!
//! | kernel          | constant | p |
//! |-----------------|----------|---|
//! | Szegő, disc     | 1/(2π)   | 1 |
//! | Bergman, disc   | 1/π      | 2 |
//! | Szegő, ball     | 1/(2π²)  | 2 |
//! | Bergman, ball   | 2/π²     | 3 |

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::ExactValue;
use crate::poly::{Dim, EvalPoint, Region};
use crate::quadrature::DomainKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelId {
    SzegoDisc,
    BergmanDisc,
    SzegoBall2,
    BergmanBall2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSpec {
    pub constant: ExactValue,
    /// `p` in `(1 − z·ζ̄)^{−p}`.
    pub exponent: u32,
}

impl KernelId {
    pub const ALL: [KernelId; 4] = [
        KernelId::SzegoDisc,
        KernelId::BergmanDisc,
        KernelId::SzegoBall2,
        KernelId::BergmanBall2,
    ];

    pub fn spec(self) -> KernelSpec {
        let (num, den, pi_power, exponent) = match self {
            KernelId::SzegoDisc => (1, 2, -1, 1),
            KernelId::BergmanDisc => (1, 1, -1, 2),
            KernelId::SzegoBall2 => (1, 2, -2, 2),
            KernelId::BergmanBall2 => (2, 1, -2, 3),
        };
        KernelSpec {
            constant: ExactValue::pi_ratio(num, den, pi_power),
            exponent,
        }
    }

    pub fn dim(self) -> Dim {
        match self {
            KernelId::SzegoDisc | KernelId::BergmanDisc => Dim::One,
            KernelId::SzegoBall2 | KernelId::BergmanBall2 => Dim::Two,
        }
    }

    /// The domain the kernel integrates over.
    pub fn domain(self) -> DomainKind {
        match self {
            KernelId::SzegoDisc => DomainKind::Circle,
            KernelId::BergmanDisc => DomainKind::Disc,
            KernelId::SzegoBall2 => DomainKind::Sphere3,
            KernelId::BergmanBall2 => DomainKind::Ball4,
        }
    }
}

/// `|1 − z·ζ̄|` below this is treated as a singularity.
pub const NEAR_SINGULAR_CUTOFF: f64 = 1e-14;

/// `constant / (1 − z·ζ̄)^p` without argument checks; used inside quadrature loops.
#[inline]
pub(crate) fn kernel_value(constant: f64, exponent: u32, w: Complex64) -> Complex64 {
    let d = Complex64::new(1.0 - w.re, -w.im);
    constant / d.powu(exponent)
}

pub fn kernel_eval(id: KernelId, z: &EvalPoint, zeta: &EvalPoint) -> Result<Complex64> {
    id.dim().check(z.dim())?;
    id.dim().check(zeta.dim())?;
    if z.region() != Region::Interior {
        return Err(Error::NotInterior {
            norm_sqr: z.norm_sqr(),
        });
    }
    let w = z.dot_conj(zeta);
    let distance = (Complex64::new(1.0, 0.0) - w).norm();
    if !(distance > NEAR_SINGULAR_CUTOFF) {
        return Err(Error::NearSingular { distance });
    }
    let spec = id.spec();
    Ok(kernel_value(
        spec.constant.to_complex64().re,
        spec.exponent,
        w,
    ))
}

/// `constant · Σ_{j=0}^{order} C(j+p−1, p−1) (z·ζ̄)^j`.
pub fn neumann_partial_sum(
    id: KernelId,
    z: &EvalPoint,
    zeta: &EvalPoint,
    order: u32,
) -> Result<Complex64> {
    id.dim().check(z.dim())?;
    id.dim().check(zeta.dim())?;
    let w = z.dot_conj(zeta);
    if !(w.norm() < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Neumann series needs |z.conj(zeta)| < 1, got {}",
            w.norm()
        )));
    }
    let spec = id.spec();
    let p = f64::from(spec.exponent);
    let mut coeff = 1.0;
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..=order {
        if j > 0 {
            let jf = f64::from(j);
            coeff *= (jf + p - 1.0) / jf;
            power *= w;
        }
        sum += power * coeff;
    }
    Ok(sum * spec.constant.to_complex64().re)
}

/// `constant · Σ_{j>order} C(j+p−1, p−1) |w|^j`, an upper bound on the
/// truncation error of [`neumann_partial_sum`].
pub fn neumann_tail_bound(id: KernelId, abs_w: f64, order: u32) -> f64 {
    assert!((0.0..1.0).contains(&abs_w));
    let spec = id.spec();
    let p = f64::from(spec.exponent);
    let mut coeff = 1.0;
    let mut power = 1.0;
    for j in 1..=order {
        let jf = f64::from(j);
        coeff *= (jf + p - 1.0) / jf;
        power *= abs_w;
    }
    let mut tail = 0.0;
    let mut j = order;
    loop {
        j += 1;
        let jf = f64::from(j);
        coeff *= (jf + p - 1.0) / jf;
        power *= abs_w;
        let term = coeff * power;
        tail += term;
        if term <= 1e-18 * tail || term == 0.0 {
            break;
        }
    }
    tail * spec.constant.to_complex64().re
}

/// The two model domains: the unit disc in ℂ and the unit ball in ℂ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelDomain {
    Disc,
    Ball2,
}

impl ModelDomain {
    pub fn dim(self) -> Dim {
        match self {
            ModelDomain::Disc => Dim::One,
            ModelDomain::Ball2 => Dim::Two,
        }
    }

    pub fn szego(self) -> KernelId {
        match self {
            ModelDomain::Disc => KernelId::SzegoDisc,
            ModelDomain::Ball2 => KernelId::SzegoBall2,
        }
    }

    pub fn bergman(self) -> KernelId {
        match self {
            ModelDomain::Disc => KernelId::BergmanDisc,
            ModelDomain::Ball2 => KernelId::BergmanBall2,
        }
    }

    pub fn boundary(self) -> DomainKind {
        self.szego().domain()
    }

    pub fn interior(self) -> DomainKind {
        self.bergman().domain()
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelDomain::Disc => "disc",
            ModelDomain::Ball2 => "ball2",
        }
    }
}

impl std::str::FromStr for ModelDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disc" => Ok(ModelDomain::Disc),
            "ball2" | "ball" => Ok(ModelDomain::Ball2),
            other => Err(Error::InvalidArgument(format!(
                "unknown domain `{other}` (expected disc or ball2)"
            ))),
        }
    }
}

/// `S(z,z) / K(z,z)` from the closed-form kernels.
pub fn kernel_diag_ratio(domain: ModelDomain, z: &EvalPoint) -> Result<f64> {
    let s = kernel_eval(domain.szego(), z, z)?;
    let k = kernel_eval(domain.bergman(), z, z)?;
    Ok(s.re / k.re)
}
