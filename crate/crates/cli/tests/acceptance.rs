//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
//! criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use kernelbench::kernels::{neumann_partial_sum, neumann_tail_bound};
use kernelbench::quadrature::cached_rule;
use kernelbench::{
    ball_terms, bergman_apply, bergman_oracle, disc_terms, disc_terms_exact, exact_moment,
    integrate, kernel_diag_ratio, kernel_eval, parse_poly, residual_table, szego_apply,
    szego_oracle, Dim, DomainKind, EvalPoint, KernelId, ModelDomain, MultiIndex, PolyObservable,
    Resolution,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn random_points(dim: Dim, count: usize, max_norm: f64, seed: u64) -> Vec<EvalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords: Vec<Complex64> = (0..dim.n())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let radius = max_norm * rng.gen::<f64>().sqrt();
            let scaled: Vec<Complex64> = coords.iter().map(|c| c * (radius / norm)).collect();
            EvalPoint::interior(&scaled).unwrap()
        })
        .collect()
}

fn monomials(dim: Dim, max: u32) -> Vec<PolyObservable> {
    let idx = MultiIndex::all_up_to(dim, max);
    idx.iter()
        .flat_map(|h| idx.iter().map(move |a| PolyObservable::unit_monomial(*h, *a)))
        .collect()
}

fn holomorphic(dim: Dim, max: u32) -> Vec<(MultiIndex, PolyObservable)> {
    MultiIndex::all_up_to(dim, max)
        .into_iter()
        .map(|a| (a, PolyObservable::unit_monomial(a, MultiIndex::zero(dim))))
        .collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn reproducing_disc() -> Outcome {
    let start = Instant::now();
    let r = Resolution::new(512, 128).map_err(err)?;
    let mut worst: f64 = 0.0;
    for z in random_points(Dim::One, 20, 0.7, 101) {
        for k in 0..=10u32 {
            let f = PolyObservable::unit_monomial(MultiIndex::one_d(k), MultiIndex::zero(Dim::One));
            let expected = z.coords()[0].powu(k);
            for apply in [szego_apply, bergman_apply] {
                let v = apply(ModelDomain::Disc, &f, &z, r).map_err(err)?.numeric().unwrap();
                worst = worst.max((v - expected).norm());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!("max error {worst:.2e} (limit 1e-10), {elapsed:.2} s (limit 10 s)");
    if worst <= 1e-10 && elapsed < 10.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn stokes_disc() -> Outcome {
    let r = Resolution::disc_default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for z in random_points(Dim::One, 10, 0.7, 202) {
        for f in monomials(Dim::One, 4) {
            let report = disc_terms(&f, &z, r).map_err(err)?;
            worst = worst.max(report.stokes_defect);
            count += 1;
        }
    }
    let detail = format!("max defect {worst:.2e} over {count} cases (limit 1e-8)");
    if worst <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn holomorphic_cancellation() -> Outcome {
    for k in 0..=10u32 {
        let f = PolyObservable::unit_monomial(MultiIndex::one_d(k), MultiIndex::zero(Dim::One));
        let report = disc_terms_exact(&f).map_err(err)?;
        if !report.residual.is_zero() {
            return Err(format!("k = {k}: residual {}", report.residual));
        }
        if report.term("B") != report.term("C") {
            return Err(format!("k = {k}: B differs from C"));
        }
        if !report.term("D").is_some_and(|d| d.is_zero()) {
            return Err(format!("k = {k}: D is not zero"));
        }
    }
    Ok("residual, B - C and D are the exact zero polynomial for k = 0..10".into())
}

fn oracle_equivalence() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (domain, tol) in [(ModelDomain::Disc, 1e-8), (ModelDomain::Ball2, 1e-6)] {
        let dim = domain.dim();
        let r = Resolution::default_for(dim);
        let points = random_points(dim, 3, 0.7, 303);
        let mut worst: f64 = 0.0;
        for f in monomials(dim, 3) {
            let s = szego_oracle(domain, &f).map_err(err)?;
            let b = bergman_oracle(domain, &f).map_err(err)?;
            for z in &points {
                let sn = szego_apply(domain, &f, z, r).map_err(err)?.numeric().unwrap();
                let bn = bergman_apply(domain, &f, z, r).map_err(err)?.numeric().unwrap();
                worst = worst.max((sn - s.eval(z).map_err(err)?).norm());
                worst = worst.max((bn - b.eval(z).map_err(err)?).norm());
            }
        }
        ok &= worst <= tol;
        details.push(format!("{} max error {worst:.2e} (limit {tol:.0e})", domain.name()));
    }
    let detail = details.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn residual_audit() -> Outcome {
    let rows = residual_table(ModelDomain::Disc, 8, 8).map_err(err)?;
    let get = |k: u32, m: u32| {
        rows.iter()
            .find(|r| r.holo.get(1) == k && r.anti.get(1) == m)
            .ok_or(format!("row ({k},{m}) missing"))
    };
    let half = parse_poly("1/2", Dim::One).map_err(err)?;
    let third_z = parse_poly("1/3 z^1", Dim::One).map_err(err)?;
    let r11 = get(1, 1)?;
    if r11.residual != half || !r11.deviates() {
        return Err(format!("(1,1) residual {}", r11.residual));
    }
    if get(2, 1)?.residual != third_z {
        return Err(format!("(2,1) residual {}", get(2, 1)?.residual));
    }
    for row in &rows {
        let (k, m) = (row.holo.get(1), row.anti.get(1));
        if (m == 0 || k < m) && !row.residual.is_zero() {
            return Err(format!("({k},{m}) residual {} should vanish", row.residual));
        }
    }
    let deviating = rows.iter().filter(|r| r.deviates()).count();
    Ok(format!(
        "(1,1) = 1/2 flagged as deviation, (2,1) = 1/3 * z^1, {deviating} of {} rows nonzero",
        rows.len()
    ))
}

fn quadrature_moments() -> Outcome {
    let kinds = [
        (DomainKind::Circle, 2.0 * PI),
        (DomainKind::Disc, PI),
        (DomainKind::Sphere3, 2.0 * PI * PI),
        (DomainKind::Ball4, PI * PI / 2.0),
    ];
    let mut worst_moment: f64 = 0.0;
    let mut worst_mass: f64 = 0.0;
    for (kind, mass) in kinds {
        let dim = kind.dim();
        let rule = cached_rule(kind, Resolution::default_for(dim));
        worst_mass = worst_mass.max((rule.mass() - mass).abs() / mass);
        let idx = MultiIndex::all_up_to(dim, 4);
        for a in &idx {
            for b in &idx {
                let exact = exact_moment(kind, a, b).map_err(err)?.to_complex64();
                let v = integrate(&rule, |p| a.pow(p.coords()) * b.pow(p.coords()).conj())
                    .map_err(err)?;
                worst_moment = worst_moment.max((v - exact).norm());
            }
        }
    }
    let detail = format!(
        "max moment error {worst_moment:.2e} (limit 1e-10), max relative mass error {worst_mass:.2e} (limit 1e-12)"
    );
    if worst_moment <= 1e-10 && worst_mass <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reproducing_ball() -> Outcome {
    let r = Resolution::ball_default();
    let (mut worst, mut worst_gap): (f64, f64) = (0.0, 0.0);
    for z in random_points(Dim::Two, 5, 0.7, 404) {
        for (a, f) in holomorphic(Dim::Two, 3) {
            let expected = a.pow(z.coords());
            let s = szego_apply(ModelDomain::Ball2, &f, &z, r).map_err(err)?.numeric().unwrap();
            let b = bergman_apply(ModelDomain::Ball2, &f, &z, r).map_err(err)?.numeric().unwrap();
            worst = worst.max((s - expected).norm()).max((b - expected).norm());
            worst_gap = worst_gap.max((s - b).norm());
        }
    }
    let detail = format!("max error {worst:.2e} (limit 1e-6), max Szegő/Bergman gap {worst_gap:.2e} (limit 2e-6)");
    if worst <= 1e-6 && worst_gap <= 2e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kernel_ratio() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut max_over: f64 = 0.0;
    for (domain, denom) in [(ModelDomain::Disc, 2.0), (ModelDomain::Ball2, 4.0)] {
        let mut points = random_points(domain.dim(), 50, 0.999, 505);
        for i in 0..100 {
            let x = Complex64::new(0.0099 * f64::from(i), 0.0);
            points.push(match domain {
                ModelDomain::Disc => EvalPoint::disc(x).map_err(err)?,
                ModelDomain::Ball2 => EvalPoint::ball(x, Complex64::new(0.0, 0.0)).map_err(err)?,
            });
        }
        for z in &points {
            let q = kernel_diag_ratio(domain, z).map_err(err)?;
            let s = kernel_eval(domain.szego(), z, z).map_err(err)?.re;
            let k = kernel_eval(domain.bergman(), z, z).map_err(err)?.re;
            let formula = (1.0 - z.norm_sqr()) / denom;
            worst = worst.max((q - s / k).abs()).max((q - formula).abs());
            max_over = max_over.max(q / (1.0 - z.norm()));
        }
    }
    let detail = format!("max deviation {worst:.2e} (limit 1e-14), max ratio/delta {max_over:.6} (limit 1)");
    if worst <= 1e-14 && max_over <= 1.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn neumann_convergence() -> Outcome {
    let mut worst_dev: f64 = 0.0;
    let mut details = Vec::new();
    for id in KernelId::ALL {
        let p = id.spec().exponent;
        // C(m+p, p-1): growth of the leading tail coefficient
        let lead = |m: u32| -> f64 { (1..p).map(|j| f64::from(m + 1 + j) / f64::from(j)).product() };
        for (abs_w, arg) in [0.5f64, 0.64, 0.8].into_iter().flat_map(|a| [(a, 0.0), (a, 0.7)]) {
            let phase = Complex64::from_polar(1.0, arg);
            let (z, zeta) = match id.dim() {
                Dim::One => (
                    EvalPoint::disc(Complex64::new(abs_w.sqrt(), 0.0)).map_err(err)?,
                    EvalPoint::disc(phase.conj() * abs_w.sqrt()).map_err(err)?,
                ),
                Dim::Two => {
                    let s = (abs_w / 2.0).sqrt();
                    let c = Complex64::new(s, 0.0);
                    (
                        EvalPoint::ball(c, c).map_err(err)?,
                        EvalPoint::ball(phase.conj() * s, phase.conj() * s).map_err(err)?,
                    )
                }
            };
            let w = z.dot_conj(&zeta).norm();
            let exact = kernel_eval(id, &z, &zeta).map_err(err)?;
            let mut errors = Vec::new();
            for m in 5..=20u32 {
                let e = (neumann_partial_sum(id, &z, &zeta, m).map_err(err)? - exact).norm();
                let bound = neumann_tail_bound(id, w, m);
                if e > bound * (1.0 + 1e-9) {
                    return Err(format!("{id:?} |w| = {abs_w} order {m}: error {e:.3e} above tail bound {bound:.3e}"));
                }
                errors.push(e / lead(m));
            }
            let observed = (errors[15] / errors[0]).powf(1.0 / 15.0);
            let dev = (observed / w - 1.0).abs();
            worst_dev = worst_dev.max(dev);
            if dev > 0.05 {
                details.push(format!("{id:?} w = {abs_w}e^{arg}i: observed ratio {observed:.4}"));
            }
        }
    }
    if details.is_empty() {
        Ok(format!(
            "errors within the geometric tail bound; observed ratio within {:.1}% of |z.conj(zeta)| (limit 5%)",
            100.0 * worst_dev
        ))
    } else {
        Err(details.join("; "))
    }
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_kernelbench"))
            .args([
                "verify",
                "--domain",
                "disc",
                "--f",
                "z^3 zb^1 - 2/3 i * z^2",
                "--f",
                "z^1 zb^1",
                "--z",
                "0.3-0.2i",
                "--z",
                "-0.6+0.1i",
                "--threads",
                threads,
            ])
            .output()
            .map_err(err)
    };
    let one = run("1")?;
    let four = run("4")?;
    if one.status.code() != Some(0) || one.stdout.is_empty() {
        return Err(format!("verify exited with {:?}", one.status.code()));
    }
    if one.stdout == four.stdout {
        Ok(format!("{} bytes identical with 1 and 4 threads", one.stdout.len()))
    } else {
        Err("CSV differs between 1 and 4 threads".into())
    }
}

fn ball_diagnostic() -> Outcome {
    let r = Resolution::ball_default();
    let z = EvalPoint::ball(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.15)).map_err(err)?;
    let mut parts = Vec::new();
    for s in ["1", "z1^1", "z1^1 zb1^1"] {
        let f = parse_poly(s, Dim::Two).map_err(err)?;
        let report = ball_terms(&f, &z, r).map_err(err)?;
        if report.terms.len() != 6 || !report.stokes_defect.is_finite() {
            return Err(format!("f = {s}: incomplete report"));
        }
        parts.push(format!("f = {s}: defect {:.6}", report.stokes_defect));
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("reproducing property on the disc", reproducing_disc),
        ("Stokes identity on the disc", stokes_disc),
        ("holomorphic cancellation, exact", holomorphic_cancellation),
        ("quadrature against exact oracles", oracle_equivalence),
        ("residual audit", residual_audit),
        ("quadrature moments and masses", quadrature_moments),
        ("reproducing property on the ball", reproducing_ball),
        ("kernel diagonal ratio", kernel_ratio),
        ("Neumann series convergence", neumann_convergence),
        ("determinism across thread counts", determinism),
        ("ball six-term diagnostic", ball_diagnostic),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!("criterion {:>2} {status}: {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
