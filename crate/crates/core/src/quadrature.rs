//! Tensor-product rules on the unit circle, disc, 3-sphere and 4-ball, exact
//! monomial moments, and a deterministic integrator.
//!
//! Angles use the uniform grid, which integrates `e^{ikθ}` exactly for
//! `|k| < nTheta`. Radial-type coordinates are substituted so that surviving
//! monomials become ordinary polynomials on `[0, 1]`, then handled by
//! Gauss–Legendre:
//!
//! * disc: `t = r²`, `dA = ½ dt dθ`
//! * 3-sphere: `ζ₁ = cos s·e^{iθ₁}`, `ζ₂ = sin s·e^{iθ₂}`, `u = cos² s`,
//!   `dσ = cos s sin s ds dθ₁ dθ₂ = ½ du dθ₁ dθ₂`
//! * 4-ball: `ζ = ρ·ω`, `t = ρ²`, `dV = ρ³ dρ dσ = ½ t dt dσ`

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{factorial, ExactValue, RationalComplex};
use crate::poly::{Dim, EvalPoint, MultiIndex, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainKind {
    Circle,
    Disc,
    Sphere3,
    Ball4,
}

impl DomainKind {
    pub fn dim(self) -> Dim {
        match self {
            DomainKind::Circle | DomainKind::Disc => Dim::One,
            DomainKind::Sphere3 | DomainKind::Ball4 => Dim::Two,
        }
    }

    pub fn region(self) -> Region {
        match self {
            DomainKind::Circle | DomainKind::Sphere3 => Region::Boundary,
            DomainKind::Disc | DomainKind::Ball4 => Region::Interior,
        }
    }

    /// Total measure: 2π, π, 2π², π²/2.
    pub fn measure(self) -> ExactValue {
        match self {
            DomainKind::Circle => ExactValue::pi_ratio(2, 1, 1),
            DomainKind::Disc => ExactValue::pi_ratio(1, 1, 1),
            DomainKind::Sphere3 => ExactValue::pi_ratio(2, 1, 2),
            DomainKind::Ball4 => ExactValue::pi_ratio(1, 2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Circle => "circle",
            DomainKind::Disc => "disc",
            DomainKind::Sphere3 => "sphere3",
            DomainKind::Ball4 => "ball4",
        }
    }
}

/// Grid parameters: `n_theta` points per angle, `n_radial` Gauss–Legendre
/// points per radial or latitude coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Resolution {
    n_theta: usize,
    n_radial: usize,
}

impl Resolution {
    pub fn new(n_theta: usize, n_radial: usize) -> Result<Self> {
        if n_theta < 4 || n_theta % 2 != 0 {
            return Err(Error::InvalidResolution(format!(
                "nTheta must be even and >= 4, got {n_theta}"
            )));
        }
        if n_radial < 2 {
            return Err(Error::InvalidResolution(format!(
                "nRadial must be >= 2, got {n_radial}"
            )));
        }
        Ok(Self { n_theta, n_radial })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    /// Default for the one-variable domains; resolves |z| up to 0.95.
    pub fn disc_default() -> Self {
        Self {
            n_theta: 1024,
            n_radial: 32,
        }
    }

    /// Default for the ℂ² domains, sized for |z| ≤ 0.7.
    pub fn ball_default() -> Self {
        Self {
            n_theta: 64,
            n_radial: 8,
        }
    }

    pub fn default_for(dim: Dim) -> Self {
        match dim {
            Dim::One => Self::disc_default(),
            Dim::Two => Self::ball_default(),
        }
    }

    /// Smallest even angular count `≥ self.n_theta` for which the aliased
    /// Neumann terms of a kernel centred at radius `radius` fall below `eps`
    /// (`n² · radius^n ≤ eps`).
    pub fn with_aliasing_margin(self, radius: f64, eps: f64) -> Self {
        let mut n = self.n_theta;
        if radius > 0.0 {
            while (n as f64).powi(2) * radius.powi(n as i32) > eps {
                n += 2;
            }
        }
        Self { n_theta: n, ..self }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut root = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, root);
            dp = d;
            let step = p / d;
            root -= step;
            if step.abs() <= 1e-16 * root.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, root);
                dp = d;
                break;
            }
        }
        let weight = 2.0 / ((1.0 - root * root) * dp * dp);
        x[i] = -root;
        x[n - 1 - i] = root;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Legendre mapped to `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|v| 0.5 * (v + 1.0)).collect(),
        w.iter().map(|v| 0.5 * v).collect(),
    )
}

fn angles(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let (s, c) = (2.0 * PI * j as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    kind: DomainKind,
    nodes: Vec<EvalPoint>,
    weights: Vec<f64>,
    resolution: Resolution,
}

impl QuadratureRule {
    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn nodes(&self) -> &[EvalPoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wⱼ`, pairwise-summed.
    pub fn mass(&self) -> f64 {
        pairwise_real(&self.weights)
    }

    /// Fails when the weight sum misses the domain measure by more than
    /// `rel_tol` relative.
    pub fn check_mass(&self, rel_tol: f64) -> Result<()> {
        let mass = self.mass();
        let expected = self.kind.measure().to_complex64().re;
        if (mass - expected).abs() > rel_tol * expected {
            return Err(Error::MassCheck { mass, expected });
        }
        Ok(())
    }
}

pub fn circle_rule(r: Resolution) -> QuadratureRule {
    let n = r.n_theta;
    let w = 2.0 * PI / n as f64;
    let nodes = angles(n)
        .into_iter()
        .map(|e| EvalPoint::node(Dim::One, [e, Complex64::new(0.0, 0.0)], Region::Boundary))
        .collect();
    QuadratureRule {
        kind: DomainKind::Circle,
        nodes,
        weights: vec![w; n],
        resolution: r,
    }
}

pub fn disc_rule(r: Resolution) -> QuadratureRule {
    let (t, wt) = gauss_legendre_unit(r.n_radial);
    let dtheta = 2.0 * PI / r.n_theta as f64;
    let phases = angles(r.n_theta);
    let mut nodes = Vec::with_capacity(t.len() * phases.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (tk, wk) in t.iter().zip(&wt) {
        let radius = tk.sqrt();
        for e in &phases {
            nodes.push(EvalPoint::node(
                Dim::One,
                [e * radius, Complex64::new(0.0, 0.0)],
                Region::Interior,
            ));
            weights.push(0.5 * wk * dtheta);
        }
    }
    QuadratureRule {
        kind: DomainKind::Disc,
        nodes,
        weights,
        resolution: r,
    }
}

/// Sphere nodes scaled by `scale`, with weights multiplied by `weight_scale`.
fn push_sphere(
    r: Resolution,
    scale: f64,
    weight_scale: f64,
    region: Region,
    nodes: &mut Vec<EvalPoint>,
    weights: &mut Vec<f64>,
) {
    let (u, wu) = gauss_legendre_unit(r.n_radial);
    let dtheta = 2.0 * PI / r.n_theta as f64;
    let phases = angles(r.n_theta);
    for (uk, wk) in u.iter().zip(&wu) {
        let c = uk.sqrt() * scale;
        let s = (1.0 - uk).sqrt() * scale;
        let w = 0.5 * wk * dtheta * dtheta * weight_scale;
        for e1 in &phases {
            for e2 in &phases {
                nodes.push(EvalPoint::node(Dim::Two, [e1 * c, e2 * s], region));
                weights.push(w);
            }
        }
    }
}

pub fn sphere3_rule(r: Resolution) -> QuadratureRule {
    let cap = r.n_radial * r.n_theta * r.n_theta;
    let mut nodes = Vec::with_capacity(cap);
    let mut weights = Vec::with_capacity(cap);
    push_sphere(r, 1.0, 1.0, Region::Boundary, &mut nodes, &mut weights);
    QuadratureRule {
        kind: DomainKind::Sphere3,
        nodes,
        weights,
        resolution: r,
    }
}

pub fn ball4_rule(r: Resolution) -> QuadratureRule {
    let (t, wt) = gauss_legendre_unit(r.n_radial);
    let cap = r.n_radial * r.n_radial * r.n_theta * r.n_theta;
    let mut nodes = Vec::with_capacity(cap);
    let mut weights = Vec::with_capacity(cap);
    for (tk, wk) in t.iter().zip(&wt) {
        push_sphere(
            r,
            tk.sqrt(),
            0.5 * tk * wk,
            Region::Interior,
            &mut nodes,
            &mut weights,
        );
    }
    QuadratureRule {
        kind: DomainKind::Ball4,
        nodes,
        weights,
        resolution: r,
    }
}

pub fn build_rule(kind: DomainKind, r: Resolution) -> QuadratureRule {
    match kind {
        DomainKind::Circle => circle_rule(r),
        DomainKind::Disc => disc_rule(r),
        DomainKind::Sphere3 => sphere3_rule(r),
        DomainKind::Ball4 => ball4_rule(r),
    }
}

type RuleCache = Mutex<HashMap<(DomainKind, Resolution), Arc<QuadratureRule>>>;

/// Memoized [`build_rule`]; rules are immutable once built.
pub fn cached_rule(kind: DomainKind, r: Resolution) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&(kind, r)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_rule(kind, r));
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry((kind, r))
        .or_insert(rule)
        .clone()
}

const LEAF: usize = 64;
const PARALLEL_MIN: usize = 1 << 13;

/// `Σ wⱼ·g(nodeⱼ)` by pairwise summation over a fixed binary split of the node
/// list. The split does not depend on the thread count, so the result is
/// bit-identical for any rayon pool size.
pub fn integrate<G>(rule: &QuadratureRule, g: G) -> Result<Complex64>
where
    G: Fn(&EvalPoint) -> Complex64 + Sync,
{
    pairwise(&rule.nodes, &rule.weights, 0, &g).map_err(|(index, value)| Error::NonFinite {
        index,
        value: value.to_string(),
    })
}

fn pairwise<G>(
    nodes: &[EvalPoint],
    weights: &[f64],
    offset: usize,
    g: &G,
) -> std::result::Result<Complex64, (usize, Complex64)>
where
    G: Fn(&EvalPoint) -> Complex64 + Sync,
{
    let n = nodes.len();
    if n <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (node, w)) in nodes.iter().zip(weights).enumerate() {
            let v = g(node);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err((offset + j, v));
            }
            acc += v * w;
        }
        return Ok(acc);
    }
    let mid = n / 2;
    let (ln, rn) = nodes.split_at(mid);
    let (lw, rw) = weights.split_at(mid);
    let (left, right) = if n >= PARALLEL_MIN {
        rayon::join(
            || pairwise(ln, lw, offset, g),
            || pairwise(rn, rw, offset + mid, g),
        )
    } else {
        (
            pairwise(ln, lw, offset, g),
            pairwise(rn, rw, offset + mid, g),
        )
    };
    Ok(left? + right?)
}

fn pairwise_real(v: &[f64]) -> f64 {
    if v.len() <= LEAF {
        return v.iter().sum();
    }
    let (l, r) = v.split_at(v.len() / 2);
    pairwise_real(l) + pairwise_real(r)
}

/// Exact `∫ ζ^α ζ̄^β` over the domain. Zero unless `α = β`; otherwise
/// circle `2π`, disc `π/(a+1)`, 3-sphere `2π²·α!/(|α|+1)!`,
/// 4-ball `π²·α!/(|α|+2)!`.
pub fn exact_moment(kind: DomainKind, alpha: &MultiIndex, beta: &MultiIndex) -> Result<ExactValue> {
    kind.dim().check(alpha.dim())?;
    kind.dim().check(beta.dim())?;
    if alpha != beta {
        return Ok(ExactValue::zero());
    }
    let a = alpha.total();
    let ratio = |num: num_bigint::BigInt, den: num_bigint::BigInt| {
        RationalComplex::real(num_rational::BigRational::new(num, den))
    };
    Ok(match kind {
        DomainKind::Circle => ExactValue::pi_ratio(2, 1, 1),
        DomainKind::Disc => ExactValue::pi_ratio(1, i64::from(a) + 1, 1),
        DomainKind::Sphere3 => ExactValue::new(
            ratio(alpha.factorial() * 2, factorial(a + 1)),
            2,
        ),
        DomainKind::Ball4 => ExactValue::new(ratio(alpha.factorial(), factorial(a + 2)), 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyObservable;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        for deg in 0..=13 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert!((q - exact).abs() < 1e-14, "deg {deg}: {q} vs {exact}");
        }
    }

    #[test]
    fn gauss_legendre_large_n_weight_sum() {
        for n in [2, 3, 64, 128, 257] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn resolution_validation() {
        assert!(Resolution::new(3, 4).is_err());
        assert!(Resolution::new(6, 1).is_err());
        assert!(Resolution::new(2, 2).is_err());
        assert!(Resolution::new(4, 2).is_ok());
    }

    #[test]
    fn aliasing_margin_grows_with_radius() {
        let base = Resolution::new(64, 8).unwrap();
        assert_eq!(base.with_aliasing_margin(0.0, 1e-14).n_theta(), 64);
        let r = base.with_aliasing_margin(0.9, 1e-14);
        assert!(r.n_theta() > 300 && r.n_theta() % 2 == 0);
    }

    #[test]
    fn circle_rule_examples() {
        let rule = circle_rule(Resolution::new(16, 2).unwrap());
        let one = integrate(&rule, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((one.re - 2.0 * PI).abs() < 1e-14);
        let first = integrate(&rule, |p| p.coords()[0]).unwrap();
        assert!(first.norm() < 1e-14);
        // |ζ|² e^{3iθ} vanishes by orthogonality
        let v = integrate(&rule, |p| p.coords()[0].norm_sqr() * p.coords()[0].powu(3)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn disc_rule_examples() {
        let rule = disc_rule(Resolution::new(16, 4).unwrap());
        let area = integrate(&rule, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((area.re - PI).abs() < 1e-14);
        let second = integrate(&rule, |p| Complex64::new(p.coords()[0].norm_sqr(), 0.0)).unwrap();
        assert!((second.re - PI / 2.0).abs() < 1e-14);
        let f = PolyObservable::unit_monomial(MultiIndex::one_d(2), MultiIndex::one_d(1)).compile();
        let odd = integrate(&rule, |p| f.eval_coords(p.coords())).unwrap();
        assert!(odd.norm() < 1e-14);
    }

    #[test]
    fn sphere_and_ball_examples() {
        let r = Resolution::new(8, 4).unwrap();
        let s = sphere3_rule(r);
        let area = integrate(&s, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((area.re - 2.0 * PI * PI).abs() < 1e-13);
        let m = integrate(&s, |p| Complex64::new(p.coords()[0].norm_sqr(), 0.0)).unwrap();
        assert!((m.re - PI * PI).abs() < 1e-13);
        let cross = integrate(&s, |p| p.coords()[0] * p.coords()[1].conj()).unwrap();
        assert!(cross.norm() < 1e-14);
        assert!(s.nodes().iter().all(|p| (p.norm_sqr() - 1.0).abs() <= 1e-14));

        let b = ball4_rule(r);
        let vol = integrate(&b, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((vol.re - PI * PI / 2.0).abs() < 1e-13);
        let m = integrate(&b, |p| Complex64::new(p.coords()[0].norm_sqr(), 0.0)).unwrap();
        assert!((m.re - PI * PI / 6.0).abs() < 1e-13);
        let lin = integrate(&b, |p| p.coords()[0]).unwrap();
        assert!(lin.norm() < 1e-14);
        assert!(b.nodes().iter().all(|p| p.norm_sqr() < 1.0));
    }

    #[test]
    fn exact_moment_examples() {
        let one = MultiIndex::one_d(1);
        assert_eq!(
            exact_moment(DomainKind::Disc, &one, &one).unwrap(),
            ExactValue::pi_ratio(1, 2, 1)
        );
        let z2 = MultiIndex::zero(Dim::Two);
        assert_eq!(
            exact_moment(DomainKind::Sphere3, &z2, &z2).unwrap(),
            ExactValue::pi_ratio(2, 1, 2)
        );
        let e1 = MultiIndex::two_d(1, 0);
        assert_eq!(
            exact_moment(DomainKind::Ball4, &e1, &e1).unwrap(),
            ExactValue::pi_ratio(1, 6, 2)
        );
        for kind in [DomainKind::Circle, DomainKind::Disc] {
            let v = exact_moment(kind, &MultiIndex::one_d(2), &MultiIndex::one_d(1)).unwrap();
            assert!(v.is_zero());
        }
        assert!(exact_moment(DomainKind::Ball4, &one, &one).is_err());
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let rule = disc_rule(Resolution::new(64, 4).unwrap());
        let target = 137;
        let bad = rule.nodes()[target];
        let err = integrate(&rule, |p| {
            if *p == bad {
                Complex64::new(f64::NAN, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { index, .. } if index == target));
    }

    #[test]
    fn cached_rule_is_shared() {
        let r = Resolution::new(6, 3).unwrap();
        let a = cached_rule(DomainKind::Disc, r);
        let b = cached_rule(DomainKind::Disc, r);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.len(), 18);
    }
}
