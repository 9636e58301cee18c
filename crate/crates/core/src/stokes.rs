//! Interior term decompositions of the Szegő integral obtained from Stokes's
//! theorem, evaluated by quadrature and exactly.
//!
//! A [`TermSchedule`] lists the interior integrals as data: a scalar, the
//! kernel exponent `p` in `(1 − z·ζ̄)^{−p}`, a factor applied to `f`, the
//! wedge ordering of the top-degree form and the sign the term enters the sum
//! with. Forms are converted to Lebesgue measure mechanically with
//! `dζ̄ⱼ∧dζⱼ = 2i·dAⱼ`, so every constant in a schedule is checked against the
//! directly computed Szegő side instead of being trusted.

use std::collections::HashSet;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ExactValue, RationalComplex};
use crate::kernels::{kernel_value, ModelDomain};
use crate::poly::{Dim, EvalPoint, MultiIndex, PolyObservable, Wirtinger};
use crate::projections::{apply_kernel, bergman_oracle, check_point, kernel_oracle, szego_oracle};
use crate::quadrature::{cached_rule, integrate, Resolution};
use crate::symbolic::{integrate_against_kernel, MixedPoly};

/// Largest admissible `|z|` for [`disc_terms`].
pub const DISC_TERMS_MAX_NORM: f64 = 0.95;
/// Largest admissible `|z|` for [`ball_terms`].
pub const BALL_TERMS_MAX_NORM: f64 = 0.9;
/// Largest `kmax`/`mmax` accepted by [`residual_table`].
pub const RESIDUAL_TABLE_MAX_DEGREE: u32 = 8;

/// `dζⱼ` or `dζ̄ⱼ`, with `j` counted from 1. Also names the coordinate
/// `ζⱼ`/`ζ̄ⱼ` itself where a form has a coordinate coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Differential {
    Holo(usize),
    Anti(usize),
}

impl Differential {
    fn axis(self) -> usize {
        match self {
            Differential::Holo(j) | Differential::Anti(j) => j,
        }
    }

    /// Position in the canonical ordering `dζ̄₁∧dζ₁∧dζ̄₂∧dζ₂`.
    fn canonical_position(self) -> usize {
        match self {
            Differential::Anti(j) => 2 * (j - 1),
            Differential::Holo(j) => 2 * (j - 1) + 1,
        }
    }
}

/// Factor that multiplies `f` (or one of its derivatives) in a schedule entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtraFactor {
    One,
    /// `z·ζ̄`
    ZDotZetaBar,
    /// `ζⱼ · ∂f/∂ζⱼ`
    HoloEuler(usize),
    /// `ζ̄ⱼ · ∂f/∂ζ̄ⱼ`
    AntiEuler(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleEntry {
    pub label: String,
    pub scalar: ExactValue,
    pub kernel_exponent: u32,
    pub extra: ExtraFactor,
    pub form: Vec<Differential>,
    pub orientation_sign: i8,
}

impl ScheduleEntry {
    fn new(
        label: &str,
        scalar: ExactValue,
        kernel_exponent: u32,
        extra: ExtraFactor,
        form: &[Differential],
        orientation_sign: i8,
    ) -> Self {
        Self {
            label: label.to_string(),
            scalar,
            kernel_exponent,
            extra,
            form: form.to_vec(),
            orientation_sign,
        }
    }

    /// The polynomial the kernel multiplies, before any `z·ζ̄` factor.
    fn base_poly(&self, f: &PolyObservable) -> Result<PolyObservable> {
        let dim = f.dim();
        match self.extra {
            ExtraFactor::One | ExtraFactor::ZDotZetaBar => Ok(f.clone()),
            ExtraFactor::HoloEuler(j) => {
                let coord = PolyObservable::unit_monomial(MultiIndex::unit(dim, j), MultiIndex::zero(dim));
                f.differentiate(Wirtinger::Holo, j)?.mul(&coord)
            }
            ExtraFactor::AntiEuler(j) => {
                let coord = PolyObservable::unit_monomial(MultiIndex::zero(dim), MultiIndex::unit(dim, j));
                f.differentiate(Wirtinger::Anti, j)?.mul(&coord)
            }
        }
    }

    /// `scalar · (form → Lebesgue factor)`: the exact constant in front of the
    /// Lebesgue integral.
    pub fn lebesgue_scalar(&self, dim: Dim) -> Result<ExactValue> {
        Ok(self.scalar.scale(&lebesgue_factor(&self.form, dim)?))
    }
}

/// Sign of the permutation to `dζ̄₁∧dζ₁∧…` times `(2i)^n`.
pub fn lebesgue_factor(form: &[Differential], dim: Dim) -> Result<RationalComplex> {
    let n = dim.n();
    let bad = || Error::InvalidArgument(format!("{form:?} is not a top-degree form in dimension {n}"));
    if form.len() != 2 * n || form.iter().any(|d| !(1..=n).contains(&d.axis())) {
        return Err(bad());
    }
    let positions: Vec<usize> = form.iter().map(|d| d.canonical_position()).collect();
    if positions.iter().collect::<HashSet<_>>().len() != positions.len() {
        return Err(bad());
    }
    let inversions = (0..positions.len())
        .flat_map(|i| (i + 1..positions.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| positions[i] > positions[j])
        .count();
    let two_i = RationalComplex::from_integer(2) * RationalComplex::i();
    let mut factor = if inversions % 2 == 0 {
        RationalComplex::one()
    } else {
        RationalComplex::from_integer(-1)
    };
    for _ in 0..n {
        factor = &factor * &two_i;
    }
    Ok(factor)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermSchedule {
    dim: Dim,
    entries: Vec<ScheduleEntry>,
}

impl TermSchedule {
    pub fn new(dim: Dim, entries: Vec<ScheduleEntry>) -> Result<Self> {
        let mut labels = HashSet::new();
        for e in &entries {
            if !labels.insert(e.label.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate label {}", e.label)));
            }
            if e.orientation_sign.abs() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "orientation sign of {} must be ±1",
                    e.label
                )));
            }
            lebesgue_factor(&e.form, dim)?;
            if let ExtraFactor::HoloEuler(j) | ExtraFactor::AntiEuler(j) = e.extra {
                if !(1..=dim.n()).contains(&j) {
                    return Err(Error::InvalidArgument(format!("axis {j} out of range in {}", e.label)));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// The disc decomposition `A − B + C + D`.
    pub fn disc() -> Self {
        use Differential::{Anti, Holo};
        // 1/(2πi) = -i/2 · π⁻¹ and 1/(4πi) = -i/4 · π⁻¹
        let half = ExactValue::new(RationalComplex::ratio(-1, 2) * RationalComplex::i(), -1);
        let quarter = ExactValue::new(RationalComplex::ratio(-1, 4) * RationalComplex::i(), -1);
        let entries = vec![
            ScheduleEntry::new("A", half, 2, ExtraFactor::One, &[Anti(1), Holo(1)], 1),
            ScheduleEntry::new("B", quarter.clone(), 1, ExtraFactor::HoloEuler(1), &[Holo(1), Anti(1)], -1),
            ScheduleEntry::new("C", quarter.clone(), 2, ExtraFactor::ZDotZetaBar, &[Holo(1), Anti(1)], 1),
            ScheduleEntry::new("D", quarter, 1, ExtraFactor::AntiEuler(1), &[Anti(1), Holo(1)], 1),
        ];
        Self::new(Dim::One, entries).expect("disc schedule is well formed")
    }

    /// The six grouped ball terms `−A + B + C − D + E − F`, with the stated
    /// constants `1/(8π²)`, `3/(16π²)` and `1/(32π²)`.
    pub fn ball() -> Self {
        use Differential::{Anti, Holo};
        let c32 = ExactValue::pi_ratio(1, 32, -2);
        let entries = vec![
            ScheduleEntry::new(
                "A",
                ExactValue::pi_ratio(1, 8, -2),
                3,
                ExtraFactor::One,
                &[Anti(1), Holo(1), Anti(2), Holo(2)],
                -1,
            ),
            ScheduleEntry::new(
                "B",
                ExactValue::pi_ratio(3, 16, -2),
                3,
                ExtraFactor::ZDotZetaBar,
                &[Anti(1), Holo(1), Anti(2), Holo(2)],
                1,
            ),
            ScheduleEntry::new(
                "C",
                c32.clone(),
                2,
                ExtraFactor::HoloEuler(1),
                &[Holo(1), Holo(2), Anti(1), Anti(2)],
                1,
            ),
            ScheduleEntry::new(
                "D",
                c32.clone(),
                2,
                ExtraFactor::HoloEuler(2),
                &[Holo(2), Holo(1), Anti(1), Anti(2)],
                -1,
            ),
            ScheduleEntry::new(
                "E",
                c32.clone(),
                2,
                ExtraFactor::AntiEuler(1),
                &[Anti(1), Anti(2), Holo(1), Holo(2)],
                1,
            ),
            ScheduleEntry::new(
                "F",
                c32,
                2,
                ExtraFactor::AntiEuler(2),
                &[Anti(2), Anti(1), Holo(1), Holo(2)],
                -1,
            ),
        ];
        Self::new(Dim::Two, entries).expect("ball schedule is well formed")
    }

    pub fn for_domain(domain: ModelDomain) -> Self {
        match domain {
            ModelDomain::Disc => Self::disc(),
            ModelDomain::Ball2 => Self::ball(),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    /// Copy with one entry's scalar replaced.
    pub fn with_scalar(&self, label: &str, scalar: ExactValue) -> Result<Self> {
        let mut out = self.clone();
        let entry = out
            .entries
            .iter_mut()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::InvalidArgument(format!("no entry labelled {label}")))?;
        entry.scalar = scalar;
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermValue {
    pub label: String,
    pub sign: i8,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub szego_side: Complex64,
    /// In schedule order.
    pub terms: Vec<TermValue>,
    /// `|szego_side − Σ sign·term|`
    pub stokes_defect: f64,
    pub bergman_term: Complex64,
    /// `szego_side − bergman_term`
    pub residual: Complex64,
}

impl DecompositionReport {
    fn assemble(szego_side: Complex64, terms: Vec<TermValue>, bergman_term: Complex64) -> Self {
        let mut report = Self {
            szego_side,
            terms,
            stokes_defect: 0.0,
            bergman_term,
            residual: szego_side - bergman_term,
        };
        report.stokes_defect = (szego_side - report.signed_sum()).norm();
        report
    }

    pub fn signed_sum(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.value * f64::from(t.sign))
            .sum()
    }

    pub fn term(&self, label: &str) -> Option<Complex64> {
        self.terms.iter().find(|t| t.label == label).map(|t| t.value)
    }
}

fn numeric_terms(
    domain: ModelDomain,
    schedule: &TermSchedule,
    f: &PolyObservable,
    z: &EvalPoint,
    r: Resolution,
) -> Result<DecompositionReport> {
    domain.dim().check(f.dim())?;
    domain.dim().check(schedule.dim())?;
    let szego_side = apply_kernel(domain.szego(), f, z, r)?;
    let bergman_term = apply_kernel(domain.bergman(), f, z, r)?;
    let rule = cached_rule(domain.interior(), r);
    let mut terms = Vec::with_capacity(schedule.entries.len());
    for entry in &schedule.entries {
        let base = entry.base_poly(f)?.compile();
        let scalar = entry.lebesgue_scalar(domain.dim())?.to_complex64();
        let with_w = entry.extra == ExtraFactor::ZDotZetaBar;
        let p = entry.kernel_exponent;
        let integral = integrate(&rule, |zeta| {
            let w = z.dot_conj(zeta);
            let mut v = base.eval_coords(zeta.coords()) * kernel_value(1.0, p, w);
            if with_w {
                v *= w;
            }
            v
        })?;
        terms.push(TermValue {
            label: entry.label.clone(),
            sign: entry.orientation_sign,
            value: scalar * integral,
        });
    }
    Ok(DecompositionReport::assemble(szego_side, terms, bergman_term))
}

/// Disc terms `A, B, C, D` by quadrature at `z`, with the Szegő side and the
/// Bergman projection computed directly.
pub fn disc_terms(f: &PolyObservable, z: &EvalPoint, r: Resolution) -> Result<DecompositionReport> {
    check_point(ModelDomain::Disc, z, DISC_TERMS_MAX_NORM)?;
    numeric_terms(ModelDomain::Disc, &TermSchedule::disc(), f, z, r)
}

/// The six grouped ball terms by quadrature at `z`. The Bergman term is
/// `(2/π²)∫ f/(1−z·ζ̄)³ dV`, computed independently of the schedule.
pub fn ball_terms(f: &PolyObservable, z: &EvalPoint, r: Resolution) -> Result<DecompositionReport> {
    ball_terms_with(&TermSchedule::ball(), f, z, r)
}

/// [`ball_terms`] with a caller-supplied schedule.
pub fn ball_terms_with(
    schedule: &TermSchedule,
    f: &PolyObservable,
    z: &EvalPoint,
    r: Resolution,
) -> Result<DecompositionReport> {
    check_point(ModelDomain::Ball2, z, BALL_TERMS_MAX_NORM)?;
    numeric_terms(ModelDomain::Ball2, schedule, f, z, r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactTermValue {
    pub label: String,
    pub sign: i8,
    pub value: PolyObservable,
}

/// Exact counterpart of [`DecompositionReport`]; every entry is a polynomial in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDecompositionReport {
    pub szego_side: PolyObservable,
    pub terms: Vec<ExactTermValue>,
    /// `szego_side − Σ sign·term`, exactly.
    pub stokes_defect: PolyObservable,
    pub bergman_term: PolyObservable,
    pub residual: PolyObservable,
}

impl ExactDecompositionReport {
    pub fn term(&self, label: &str) -> Option<&PolyObservable> {
        self.terms.iter().find(|t| t.label == label).map(|t| &t.value)
    }

    pub fn signed_sum(&self) -> Result<PolyObservable> {
        let dim = self.szego_side.dim();
        self.terms.iter().try_fold(PolyObservable::zero(dim), |acc, t| {
            acc.add(&t.value.scale(&RationalComplex::from_integer(i64::from(t.sign))))
        })
    }

    /// Evaluates every entry at a numeric point.
    pub fn eval_at(&self, z: &EvalPoint) -> Result<DecompositionReport> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(TermValue {
                    label: t.label.clone(),
                    sign: t.sign,
                    value: t.value.eval(z)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecompositionReport::assemble(
            self.szego_side.eval(z)?,
            terms,
            self.bergman_term.eval(z)?,
        ))
    }
}

/// Exact value of one schedule entry as a polynomial in `z`.
pub fn exact_term(
    domain: ModelDomain,
    entry: &ScheduleEntry,
    f: &PolyObservable,
) -> Result<PolyObservable> {
    let mut integrand = MixedPoly::from_poly(&entry.base_poly(f)?);
    if entry.extra == ExtraFactor::ZDotZetaBar {
        integrand = integrand.times_z_dot_zetabar();
    }
    integrate_against_kernel(domain.interior(), &integrand, entry.kernel_exponent)?
        .scale(&entry.lebesgue_scalar(domain.dim())?)
        .into_rational()
}

fn exact_terms(
    domain: ModelDomain,
    schedule: &TermSchedule,
    f: &PolyObservable,
) -> Result<ExactDecompositionReport> {
    domain.dim().check(f.dim())?;
    domain.dim().check(schedule.dim())?;
    let szego_side = szego_oracle(domain, f)?;
    let bergman_term = kernel_oracle(domain.bergman(), f)?.into_rational()?;
    let terms = schedule
        .entries
        .iter()
        .map(|e| {
            Ok(ExactTermValue {
                label: e.label.clone(),
                sign: e.orientation_sign,
                value: exact_term(domain, e, f)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ExactDecompositionReport {
        residual: szego_side.sub(&bergman_term)?,
        szego_side,
        terms,
        stokes_defect: PolyObservable::zero(domain.dim()),
        bergman_term,
    };
    report.stokes_defect = report.szego_side.sub(&report.signed_sum()?)?;
    Ok(report)
}

/// Disc terms with `z` kept symbolic.
pub fn disc_terms_exact(f: &PolyObservable) -> Result<ExactDecompositionReport> {
    exact_terms(ModelDomain::Disc, &TermSchedule::disc(), f)
}

/// Ball terms with `z` kept symbolic.
pub fn ball_terms_exact(f: &PolyObservable) -> Result<ExactDecompositionReport> {
    ball_terms_exact_with(&TermSchedule::ball(), f)
}

pub fn ball_terms_exact_with(
    schedule: &TermSchedule,
    f: &PolyObservable,
) -> Result<ExactDecompositionReport> {
    exact_terms(ModelDomain::Ball2, schedule, f)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRow {
    pub holo: MultiIndex,
    pub anti: MultiIndex,
    pub szego: PolyObservable,
    pub bergman: PolyObservable,
    pub residual: PolyObservable,
}

impl ResidualRow {
    pub fn monomial(&self) -> PolyObservable {
        PolyObservable::unit_monomial(self.holo, self.anti)
    }

    /// A nonzero residual contradicts equality of the two projections on this
    /// monomial.
    pub fn deviates(&self) -> bool {
        !self.residual.is_zero()
    }
}

/// Exact residual `szego − bergman` for every monomial `ζ^k ζ̄^m` (disc) or
/// `ζ^α ζ̄^β` with `|α| ≤ kmax`, `|β| ≤ mmax` (ball), ordered by
/// `(holo, anti)` lexicographically.
pub fn residual_table(domain: ModelDomain, kmax: u32, mmax: u32) -> Result<Vec<ResidualRow>> {
    if kmax > RESIDUAL_TABLE_MAX_DEGREE || mmax > RESIDUAL_TABLE_MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "kmax and mmax must be at most {RESIDUAL_TABLE_MAX_DEGREE}"
        )));
    }
    let dim = domain.dim();
    let mut holos = MultiIndex::all_up_to(dim, kmax);
    let mut antis = MultiIndex::all_up_to(dim, mmax);
    holos.sort();
    antis.sort();
    let pairs: Vec<(MultiIndex, MultiIndex)> = holos
        .iter()
        .flat_map(|h| antis.iter().map(move |a| (*h, *a)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(holo, anti)| {
            let f = PolyObservable::unit_monomial(holo, anti);
            let szego = szego_oracle(domain, &f)?;
            let bergman = bergman_oracle(domain, &f)?;
            let residual = szego.sub(&bergman)?;
            Ok(ResidualRow {
                holo,
                anti,
                szego,
                bergman,
                residual,
            })
        })
        .collect()
}
