//! The five commands. Each returns its CSV text, whether the run passed its
//! own check, and notes for standard error.

use std::f64::consts::PI;

use kernelbench::boundary_form::{measure_audit, SurfaceForm};
use kernelbench::quadrature::build_rule;
use kernelbench::{
    ball_terms, bergman_apply, disc_terms, exact_moment, format_poly, integrate,
    kernel_diag_ratio, parse_poly, residual_table, szego_apply, Dim, DomainKind, EvalPoint,
    ModelDomain, MultiIndex, Resolution,
};
use num_complex::Complex64;

use crate::config::{CommandKind, ConvergenceCase, RunConfig};
use crate::{CliError, Outcome};

/// Aliased Neumann terms are pushed below this when the resolution is chosen
/// automatically.
const ALIASING_EPS: f64 = 1e-12;
/// Upper bound on the automatic angular count for the ℂ² rules, which have
/// `n_theta² · n_radial²` nodes.
const BALL_MAX_AUTO_THETA: usize = 256;
/// Errors below this are treated as converged in the monotonicity check.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        CommandKind::Verify => verify(cfg),
        CommandKind::ResidualTable => residual(cfg),
        CommandKind::Ratio => ratio(cfg),
        CommandKind::Convergence => convergence(cfg),
        CommandKind::MeasureAudit => audit(cfg),
    }
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_complex(c: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", c.re, c.im)
}

pub fn fmt_point(z: &EvalPoint) -> String {
    match z.coords() {
        [a] => fmt_complex(*a),
        coords => {
            let parts: Vec<String> = coords.iter().map(|c| fmt_complex(*c)).collect();
            format!("({})", parts.join(","))
        }
    }
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(csv_error)?;
        Ok(Self { writer })
    }

    fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        self.writer.write_record(fields).map_err(csv_error)
    }

    fn finish(self) -> Result<String, CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

fn point_resolution(cfg: &RunConfig, z: &EvalPoint) -> Resolution {
    if let Some(r) = cfg.resolution {
        return r;
    }
    let dim = cfg.domain.dim();
    let r = Resolution::default_for(dim).with_aliasing_margin(z.norm(), ALIASING_EPS);
    match dim {
        Dim::Two if r.n_theta() > BALL_MAX_AUTO_THETA => {
            Resolution::new(BALL_MAX_AUTO_THETA, r.n_radial()).expect("valid resolution")
        }
        _ => r,
    }
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.polys.is_empty() || cfg.points.is_empty() {
        return Err(CliError::Usage("verify needs at least one --f and one --z".into()));
    }
    let polys = cfg
        .polys
        .iter()
        .map(|s| parse_poly(s, cfg.domain.dim()).map_err(|e| CliError::Core(e.into())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "domain",
        "f",
        "z",
        "szego",
        "bergman",
        "residual",
        "stokes_defect",
        "pass",
    ])?;
    let mut passed = true;
    let mut notes = Vec::new();
    for f in &polys {
        for z in &cfg.points {
            let r = point_resolution(cfg, z);
            let report = match cfg.domain {
                ModelDomain::Disc => disc_terms(f, z, r)?,
                ModelDomain::Ball2 => ball_terms(f, z, r)?,
            };
            let ok = report.stokes_defect <= cfg.tolerance;
            if !ok {
                passed = false;
                notes.push(format!(
                    "stokes defect {:.3e} exceeds tolerance {:.1e} for f = {f} at z = {}",
                    report.stokes_defect,
                    cfg.tolerance,
                    fmt_point(z)
                ));
            }
            table.row(&[
                cfg.domain.name().to_string(),
                format_poly(f),
                fmt_point(z),
                fmt_complex(report.szego_side),
                fmt_complex(report.bergman_term),
                fmt_complex(report.residual),
                fmt_real(report.stokes_defect),
                ok.to_string(),
            ])?;
        }
    }
    Ok(Outcome {
        csv: table.finish()?,
        passed,
        notes,
    })
}

fn residual(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = residual_table(cfg.domain, cfg.kmax, cfg.mmax)?;
    let mut table = Table::new(&["domain", "alpha", "beta", "monomial", "residual", "deviation"])?;
    let mut deviating = Vec::new();
    for row in &rows {
        if row.deviates() {
            deviating.push(format!("({}; {})", row.holo, row.anti));
        }
        table.row(&[
            cfg.domain.name().to_string(),
            row.holo.to_string(),
            row.anti.to_string(),
            format_poly(&row.monomial()),
            format_poly(&row.residual),
            row.deviates().to_string(),
        ])?;
    }
    let mut notes = Vec::new();
    if !deviating.is_empty() {
        notes.push(format!(
            "{} of {} monomials have a nonzero Szegő − Bergman residual: {}",
            deviating.len(),
            rows.len(),
            deviating.join(" ")
        ));
    }
    Ok(Outcome {
        csv: table.finish()?,
        passed: true,
        notes,
    })
}

fn ratio(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(&["abs_z", "delta", "ratio", "ratio_over_delta"])?;
    let mut passed = true;
    let mut notes = Vec::new();
    for i in 0..cfg.samples {
        let r = cfg.max_radius * i as f64 / (cfg.samples - 1) as f64;
        let x = Complex64::new(r, 0.0);
        let z = match cfg.domain {
            ModelDomain::Disc => EvalPoint::disc(x)?,
            ModelDomain::Ball2 => EvalPoint::ball(x, Complex64::new(0.0, 0.0))?,
        };
        let delta = 1.0 - r;
        let q = kernel_diag_ratio(cfg.domain, &z)?;
        let over = q / delta;
        if !(over > 0.0 && over <= 1.0) {
            passed = false;
            notes.push(format!("ratio/delta = {over} at |z| = {r} lies outside (0, 1]"));
        }
        table.row(&[fmt_real(r), fmt_real(delta), fmt_real(q), fmt_real(over)])?;
    }
    Ok(Outcome {
        csv: table.finish()?,
        passed,
        notes,
    })
}

fn ladder(case: ConvergenceCase) -> Vec<Resolution> {
    let pairs: &[(usize, usize)] = match case {
        ConvergenceCase::DiscReproduce | ConvergenceCase::DiscMoment | ConvergenceCase::DiscKernel => {
            &[(8, 2), (16, 4), (32, 8), (64, 16), (128, 32), (256, 64), (512, 128)]
        }
        ConvergenceCase::BallReproduce | ConvergenceCase::BallMass => {
            &[(8, 2), (16, 4), (32, 8), (64, 8), (128, 8)]
        }
    };
    pairs
        .iter()
        .map(|&(t, r)| Resolution::new(t, r).expect("valid resolution"))
        .collect()
}

/// `(node count, |numeric − exact|)` for one rung of the ladder.
fn convergence_error(case: ConvergenceCase, r: Resolution) -> Result<(usize, f64), CliError> {
    let one = Complex64::new(1.0, 0.0);
    Ok(match case {
        ConvergenceCase::DiscReproduce => {
            let f = parse_poly("z^3", Dim::One).map_err(|e| CliError::Core(e.into()))?;
            let z = EvalPoint::disc(Complex64::new(0.5, 0.0))?;
            let v = bergman_apply(ModelDomain::Disc, &f, &z, r)?.numeric().unwrap_or_default();
            (r.n_theta() * r.n_radial(), (v - 0.125).norm())
        }
        ConvergenceCase::BallReproduce => {
            let f = parse_poly("z1^2", Dim::Two).map_err(|e| CliError::Core(e.into()))?;
            let z = EvalPoint::ball(Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.0))?;
            let v = szego_apply(ModelDomain::Ball2, &f, &z, r)?.numeric().unwrap_or_default();
            (r.n_theta().pow(2) * r.n_radial(), (v - 0.25).norm())
        }
        ConvergenceCase::BallMass => {
            let rule = build_rule(DomainKind::Sphere3, r);
            (rule.len(), (rule.mass() - 2.0 * PI * PI).abs())
        }
        ConvergenceCase::DiscMoment => {
            let rule = build_rule(DomainKind::Disc, r);
            let a = MultiIndex::one_d(2);
            let exact = exact_moment(DomainKind::Disc, &a, &a)?.to_complex64();
            let v = integrate(&rule, |p| Complex64::new(p.coords()[0].norm_sqr().powi(2), 0.0))?;
            (rule.len(), (v - exact).norm())
        }
        ConvergenceCase::DiscKernel => {
            let rule = build_rule(DomainKind::Disc, r);
            let z = EvalPoint::disc(Complex64::new(0.5, 0.0))?;
            let v = integrate(&rule, |p| {
                let d = one - z.dot_conj(p);
                one / (d * d)
            })?;
            (rule.len(), (v - PI).norm())
        }
    })
}

/// True when every error from the second row on is no larger than the one
/// before it, ignoring rows already at roundoff.
pub fn monotone_after_first(errors: &[f64]) -> bool {
    errors
        .windows(2)
        .skip(1)
        .all(|w| w[1] <= w[0] || w[1] <= ROUNDOFF_FLOOR)
}

fn convergence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cases: Vec<ConvergenceCase> = match cfg.case {
        Some(c) => vec![c],
        None => ConvergenceCase::ALL.to_vec(),
    };
    let mut table = Table::new(&["case", "n_theta", "n_radial", "nodes", "error"])?;
    let mut passed = true;
    let mut notes = Vec::new();
    for case in cases {
        let mut errors = Vec::new();
        for r in ladder(case) {
            let (nodes, err) = convergence_error(case, r)?;
            errors.push(err);
            table.row(&[
                case.name().to_string(),
                r.n_theta().to_string(),
                r.n_radial().to_string(),
                nodes.to_string(),
                fmt_real(err),
            ])?;
        }
        if !monotone_after_first(&errors) {
            passed = false;
            notes.push(format!("{}: error is not decreasing", case.name()));
        }
    }
    Ok(Outcome {
        csv: table.finish()?,
        passed,
        notes,
    })
}

fn audit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = cfg
        .resolution
        .unwrap_or_else(|| Resolution::new(32, 16).expect("valid resolution"));
    let rows = measure_audit(&SurfaceForm::stokes_sphere_form(), r)?;
    let mut table = Table::new(&["integrand", "form_integral", "geometric_integral", "ratio"])?;
    let mut notes = Vec::new();
    for row in &rows {
        table.row(&[
            format_poly(&row.integrand),
            fmt_complex(row.form_integral),
            fmt_real(row.geometric_integral.re),
            fmt_real(row.ratio()),
        ])?;
        if row.geometric_integral.norm() > 0.0 {
            notes.push(format!(
                "integrand {}: form integral {:.6} vs {:.6}, ratio {:.6}",
                format_poly(&row.integrand),
                row.form_integral.re,
                row.geometric_integral.re,
                row.ratio()
            ));
        } else {
            notes.push(format!(
                "integrand {}: form integral {:.6}",
                format_poly(&row.integrand),
                row.form_integral.re
            ));
        }
    }
    Ok(Outcome {
        csv: table.finish()?,
        passed: true,
        notes,
    })
}
