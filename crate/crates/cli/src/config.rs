//! Command-line flags, the optional TOML config file, and their merge into a
//! validated [`RunConfig`].

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use kernelbench::{Dim, EvalPoint, ModelDomain, Resolution};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

/// Largest admissible `|z|` on the command line.
pub const MAX_POINT_NORM: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Projections, residual and Stokes defect for each test function and point.
    Verify,
    /// Exact Szegő − Bergman residual for every monomial up to kmax/mmax.
    ResidualTable,
    /// Diagonal kernel ratio against the boundary distance.
    Ratio,
    /// Quadrature error at doubling resolutions.
    Convergence,
    /// Mass of the 1/16 surface form on the unit sphere.
    MeasureAudit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceCase {
    /// Bergman projection of ζ³ at z = 0.5 on the disc.
    DiscReproduce,
    /// Szegő projection of ζ₁² at z = (0.5, 0.3) on the ball.
    BallReproduce,
    /// Total weight of the 3-sphere rule against 2π².
    BallMass,
    /// ∫|ζ|⁴ dA against π/3.
    DiscMoment,
    /// ∫(1 − zζ̄)⁻² dA at z = 0.5 against π.
    DiscKernel,
}

impl ConvergenceCase {
    pub const ALL: [ConvergenceCase; 5] = [
        ConvergenceCase::DiscReproduce,
        ConvergenceCase::BallReproduce,
        ConvergenceCase::BallMass,
        ConvergenceCase::DiscMoment,
        ConvergenceCase::DiscKernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConvergenceCase::DiscReproduce => "disc-reproduce",
            ConvergenceCase::BallReproduce => "ball-reproduce",
            ConvergenceCase::BallMass => "ball-mass",
            ConvergenceCase::DiscMoment => "disc-moment",
            ConvergenceCase::DiscKernel => "disc-kernel",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kernelbench", version, about = "Bergman and Szegő kernel verification harness")]
pub struct Cli {
    /// Command to run; may instead be given as `command` in the config file.
    #[arg(value_enum)]
    pub command: Option<CommandKind>,

    /// TOML file with defaults for any of the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// disc or ball2.
    #[arg(long)]
    pub domain: Option<String>,

    /// Test function in the polynomial grammar; repeatable.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub polys: Vec<String>,

    /// Evaluation point: `a+bi` on the disc, `(a+bi,c+di)` on the ball; repeatable.
    #[arg(long = "z", allow_hyphen_values = true)]
    pub points: Vec<String>,

    #[arg(long)]
    pub n_theta: Option<usize>,

    #[arg(long)]
    pub n_radial: Option<usize>,

    /// Largest accepted Stokes defect in `verify`.
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Worker threads for quadrature.
    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long)]
    pub kmax: Option<u32>,

    #[arg(long)]
    pub mmax: Option<u32>,

    /// Radial samples in `ratio`.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Largest |z| sampled in `ratio`.
    #[arg(long)]
    pub max_radius: Option<f64>,

    /// Convergence case; all cases when absent.
    #[arg(long, value_enum)]
    pub case: Option<ConvergenceCase>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    #[default]
    None,
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::None => Vec::new(),
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<CommandKind>,
    domain: Option<String>,
    #[serde(default)]
    f: OneOrMany,
    #[serde(default)]
    z: OneOrMany,
    n_theta: Option<usize>,
    n_radial: Option<usize>,
    tolerance: Option<f64>,
    output: Option<PathBuf>,
    threads: Option<usize>,
    kmax: Option<u32>,
    mmax: Option<u32>,
    samples: Option<usize>,
    max_radius: Option<f64>,
    case: Option<ConvergenceCase>,
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub domain: ModelDomain,
    pub polys: Vec<String>,
    pub points: Vec<EvalPoint>,
    /// `None` picks a per-point default with enough angular nodes for `|z|`.
    pub resolution: Option<Resolution>,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub kmax: u32,
    pub mmax: u32,
    pub samples: usize,
    pub max_radius: f64,
    pub case: Option<ConvergenceCase>,
}

impl RunConfig {
    /// Flags override the config file; the file overrides built-in defaults.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let command = cli
            .command
            .or(file.command)
            .ok_or_else(|| CliError::Usage("no command given".into()))?;
        let domain_name = cli.domain.or(file.domain).unwrap_or_else(|| "disc".into());
        let domain = ModelDomain::from_str(&domain_name).map_err(|e| CliError::Usage(e.to_string()))?;
        let polys = if cli.polys.is_empty() { file.f.into_vec() } else { cli.polys };
        let raw_points = if cli.points.is_empty() { file.z.into_vec() } else { cli.points };
        let points = raw_points
            .iter()
            .map(|s| parse_point(s, domain.dim()))
            .collect::<Result<Vec<_>, _>>()?;

        let n_theta = cli.n_theta.or(file.n_theta);
        let n_radial = cli.n_radial.or(file.n_radial);
        let resolution = if n_theta.is_none() && n_radial.is_none() {
            None
        } else {
            let d = Resolution::default_for(domain.dim());
            Some(
                Resolution::new(n_theta.unwrap_or(d.n_theta()), n_radial.unwrap_or(d.n_radial()))
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            )
        };

        let tolerance = cli.tolerance.or(file.tolerance).unwrap_or(1e-8);
        if !(tolerance > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tolerance}")));
        }
        let threads = cli.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        let samples = cli.samples.or(file.samples).unwrap_or(10);
        if samples < 2 {
            return Err(CliError::Usage("samples must be at least 2".into()));
        }
        let max_radius = cli.max_radius.or(file.max_radius).unwrap_or(0.9);
        if !(0.0..1.0).contains(&max_radius) {
            return Err(CliError::Usage(format!("max-radius must lie in [0, 1), got {max_radius}")));
        }
        Ok(Self {
            command,
            domain,
            polys,
            points,
            resolution,
            tolerance,
            output: cli.output.or(file.output),
            threads,
            kmax: cli.kmax.or(file.kmax).unwrap_or(4),
            mmax: cli.mmax.or(file.mmax).unwrap_or(4),
            samples,
            max_radius,
            case: cli.case.or(file.case),
        })
    }
}

/// Parses `a+bi`, `a`, `bi`, `-a-bi` with no spaces.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("cannot read complex number {text:?}"));
    let s = text.trim();
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// A disc point `a+bi` or a ball point `(a+bi,c+di)`, checked to be interior
/// with `|z| ≤ 0.95`.
pub fn parse_point(text: &str, dim: Dim) -> Result<EvalPoint, CliError> {
    let coords = match dim {
        Dim::One => vec![parse_complex(text)?],
        Dim::Two => {
            let inner = text
                .trim()
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| CliError::Usage(format!("ball points are written (a+bi,c+di), got {text:?}")))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::Usage(format!("ball points need two coordinates, got {text:?}")));
            }
            vec![parse_complex(parts[0])?, parse_complex(parts[1])?]
        }
    };
    let p = EvalPoint::interior(&coords).map_err(|e| CliError::Usage(format!("{text}: {e}")))?;
    if p.norm() > MAX_POINT_NORM {
        return Err(CliError::Usage(format!(
            "{text}: |z| = {} exceeds {MAX_POINT_NORM}",
            p.norm()
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.3+0i").unwrap(), Complex64::new(0.3, 0.0));
        assert_eq!(parse_complex("-0.2-0.1i").unwrap(), Complex64::new(-0.2, -0.1));
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("0.1i").unwrap(), Complex64::new(0.0, 0.1));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5e-1i").unwrap(), Complex64::new(1e-3, 0.25));
        assert_eq!(parse_complex("-1e-2i").unwrap(), Complex64::new(0.0, -1e-2));
        for bad in ["", "0.3 + 0i", "abc", "0.3+xi", "1+2", "(0.1)"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn points() {
        let p = parse_point("(0.2,0.1i)", Dim::Two).unwrap();
        assert_eq!(p.coords(), &[Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.1)]);
        assert!(parse_point("0.2", Dim::Two).is_err());
        assert!(parse_point("(0.2,0.1,0.0)", Dim::Two).is_err());
        assert!(parse_point("0.96", Dim::One).is_err());
        assert!(parse_point("1.5", Dim::One).is_err());
    }

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("kernelbench").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_and_defaults() {
        let c = RunConfig::from_cli(cli(&["verify", "--f", "z^2", "--z", "-0.3+0.1i"])).unwrap();
        assert_eq!(c.command, CommandKind::Verify);
        assert_eq!(c.domain, ModelDomain::Disc);
        assert_eq!(c.polys, vec!["z^2".to_string()]);
        assert_eq!(c.points[0].coords(), &[Complex64::new(-0.3, 0.1)]);
        assert_eq!(c.resolution, None);
        assert_eq!(c.tolerance, 1e-8);

        let c = RunConfig::from_cli(cli(&["ratio", "--domain", "ball2", "--n-theta", "32"])).unwrap();
        assert_eq!(c.resolution, Some(Resolution::new(32, 8).unwrap()));
        assert!(RunConfig::from_cli(cli(&["ratio", "--samples", "1"])).is_err());
        assert!(RunConfig::from_cli(cli(&["verify", "--tolerance", "0"])).is_err());
        assert!(RunConfig::from_cli(cli(&[])).is_err());
    }

    #[test]
    fn file_config_is_overridden_by_flags() {
        let dir = std::env::temp_dir().join(format!("kernelbench-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(
            &path,
            "command = \"verify\"\ndomain = \"ball2\"\nf = [\"z1^1\", \"z2^2\"]\nz = \"(0.2,0.1i)\"\ntolerance = 1e-6\n",
        )
        .unwrap();
        let c = RunConfig::from_cli(cli(&["--config", path.to_str().unwrap()])).unwrap();
        assert_eq!(c.command, CommandKind::Verify);
        assert_eq!(c.domain, ModelDomain::Ball2);
        assert_eq!(c.polys.len(), 2);
        assert_eq!(c.tolerance, 1e-6);
        let c = RunConfig::from_cli(cli(&[
            "--config",
            path.to_str().unwrap(),
            "--tolerance",
            "1e-3",
            "--f",
            "1",
        ]))
        .unwrap();
        assert_eq!(c.tolerance, 1e-3);
        assert_eq!(c.polys, vec!["1".to_string()]);

        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(RunConfig::from_cli(cli(&["verify", "--config", path.to_str().unwrap()])).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
