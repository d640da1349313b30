//! `xld`: exact invariants of the block-product hypersurfaces
//! x_11...x_1d + ... + x_l1...x_ld = 0 from the command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid parameters, 3 internal
//! cross-check mismatch, 4 enumeration cap or size limit exceeded.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational};
use xld_core::Error;

use render::Report;

#[derive(Parser)]
#[command(
    name = "xld",
    version,
    about = "Exact invariants of the hypersurfaces x11..x1d + ... + xl1..xld = 0"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Enumeration cap; overrides the XLD_ENUM_CAP environment variable
    /// and the built-in default.
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Hodge-Du Bois diamond of a smooth, block-product, or appended
    /// hypersurface.
    Diamond(DiamondArgs),
    /// Intersection-cohomology Betti series with palindromy and
    /// cross-route verdicts.
    Ih { l: usize, d: usize },
    /// Graded lattice-point reports for the cone over the hypersurface.
    Lattice(LatticeArgs),
    /// Torus stability computations.
    Stability {
        #[command(subcommand)]
        cmd: StabilityCmd,
    },
    /// Volume and S-invariant computations.
    Kvol {
        #[command(subcommand)]
        cmd: KvolCmd,
    },
    /// Check the golden output files, or regenerate them with --bless.
    Golden {
        /// Rewrite the files instead of comparing.
        #[arg(long)]
        bless: bool,
        /// Directory holding the golden files.
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(clap::Args)]
struct DiamondArgs {
    /// Block-product hypersurface with L blocks of degree D.
    #[arg(long, num_args = 2, value_names = ["L", "D"])]
    xld: Option<Vec<usize>>,

    /// Smooth hypersurface of dimension N and degree D.
    #[arg(long, num_args = 2, value_names = ["N", "D"], conflicts_with = "xld")]
    smooth: Option<Vec<usize>>,

    /// L degree-D blocks appended to a smooth N-fold of degree D.
    #[arg(long, num_args = 3, value_names = ["N", "D", "L"], conflicts_with_all = ["xld", "smooth"])]
    append: Option<Vec<usize>>,
}

#[derive(clap::Args)]
struct LatticeArgs {
    l: usize,
    d: usize,

    /// Enumerate the cone points of this total degree and cross-check the
    /// Hilbert function.
    #[arg(long, conflicts_with = "count_by_phi")]
    degree: Option<i64>,

    /// Stream each canonical point as a JSON line before the summary.
    #[arg(long, requires = "degree")]
    points: bool,

    /// Count points of degree N*d*(l-1) by their phi value and report the
    /// residuals against the leading asymptotic term.
    #[arg(long)]
    count_by_phi: Option<i64>,
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// First-order deformation weights: their number, the independent
    /// dimension count, and family verdicts for every block count.
    T1 { l: usize, d: usize },
    /// Polystability of the family keeping the first T blocks generic.
    Family { l: usize, d: usize, t: usize },
    /// Exact polystability of an explicit integer weight support.
    Polystable {
        /// Weight vector as comma-separated integers; repeat per vector.
        #[arg(long = "weight", required = true, allow_hyphen_values = true)]
        weights: Vec<String>,
    },
    /// Randomized verification of the appending inequality for weight
    /// systems, with the exact tightness criterion.
    Git {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Automorphism-group data: finite-part order and torus rank.
    Aut { l: usize, d: usize },
}

#[derive(Subcommand)]
enum KvolCmd {
    /// Verify the beta-integral identity over a parameter grid.
    Beta {
        #[arg(long, default_value_t = 6)]
        lmax: usize,
        #[arg(long, default_value_t = 6)]
        dmax: usize,
    },
    /// Anticanonical volume profile at a filtration level alpha.
    Volume {
        l: usize,
        d: usize,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Rational level, e.g. 0, 3/4.
        #[arg(long, default_value = "0")]
        alpha: String,
    },
    /// S-invariant by direct double integration and by the transfer law.
    Svalue {
        l: usize,
        d: usize,
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// A/S certificates for the witness valuation models.
    Delta { l: usize, d: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Trivial,
    Hyperplane,
    PointBlowup,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let payload = if text.ends_with('\n') {
                text
            } else {
                format!("{text}\n")
            };
            if let Some(path) = &cli.output {
                if let Err(err) = fs::write(path, payload) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{payload}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::OracleMismatch(_) | Error::PurityViolated(_) => 3,
                Error::CapExceeded { .. } | Error::Overflow(_) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    let report = dispatch(cli)?;
    Ok(match cli.format {
        Format::Json => report.json,
        Format::Csv => report.csv,
        Format::Pretty => report.pretty,
    })
}

fn enum_cap(cli: &Cli) -> Option<usize> {
    cli.cap.or_else(|| {
        std::env::var("XLD_ENUM_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn lattice_ctx(cli: &Cli, l: usize, d: usize) -> Result<xld_core::LatticeCtx, Error> {
    let ctx = xld_core::LatticeCtx::new(l, d)?;
    Ok(match enum_cap(cli) {
        Some(cap) => ctx.with_cap(cap),
        None => ctx,
    })
}

fn dispatch(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Diamond(args) => render::diamond(args.try_into()?),
        Command::Ih { l, d } => render::ih(*l, *d),
        Command::Lattice(args) => {
            let ctx = lattice_ctx(cli, args.l, args.d)?;
            match (args.degree, args.count_by_phi) {
                (Some(k), None) => render::lattice_degree(ctx, k, args.points),
                (None, Some(n)) => render::lattice_count_by_phi(ctx, n),
                _ => Err(Error::InvalidParameter(
                    "exactly one of --degree and --count-by-phi is required".into(),
                )),
            }
        }
        Command::Stability { cmd } => match cmd {
            StabilityCmd::T1 { l, d } => render::stability_t1(lattice_ctx(cli, *l, *d)?),
            StabilityCmd::Family { l, d, t } => render::stability_family(*l, *d, *t),
            StabilityCmd::Polystable { weights } => {
                let vectors = weights
                    .iter()
                    .map(|w| parse_weight_vector(w))
                    .collect::<Result<Vec<_>, _>>()?;
                render::stability_polystable(vectors)
            }
            StabilityCmd::Git { trials, seed } => render::stability_git(*trials, *seed),
            StabilityCmd::Aut { l, d } => render::stability_aut(*l, *d),
        },
        Command::Kvol { cmd } => match cmd {
            KvolCmd::Beta { lmax, dmax } => render::kvol_beta(*lmax, *dmax),
            KvolCmd::Volume { l, d, model, alpha } => {
                let alpha = parse_rational(alpha)?;
                render::kvol_volume(*l, *d, build_model(*model, *l)?, alpha)
            }
            KvolCmd::Svalue { l, d, model } => {
                render::kvol_svalue(*l, *d, build_model(*model, *l)?)
            }
            KvolCmd::Delta { l, d } => render::kvol_delta(*l, *d),
        },
        Command::Golden { bless, dir } => golden(*bless, dir),
    }
}

pub(crate) enum DiamondRequest {
    Xld { l: usize, d: usize },
    Smooth { n: usize, d: usize },
    Append { n: usize, d: usize, l: usize },
}

impl TryFrom<&DiamondArgs> for DiamondRequest {
    type Error = Error;

    fn try_from(args: &DiamondArgs) -> Result<Self, Error> {
        match (&args.xld, &args.smooth, &args.append) {
            (Some(v), None, None) => Ok(DiamondRequest::Xld { l: v[0], d: v[1] }),
            (None, Some(v), None) => Ok(DiamondRequest::Smooth { n: v[0], d: v[1] }),
            (None, None, Some(v)) => Ok(DiamondRequest::Append {
                n: v[0],
                d: v[1],
                l: v[2],
            }),
            _ => Err(Error::InvalidParameter(
                "exactly one of --xld, --smooth, --append is required".into(),
            )),
        }
    }
}

fn build_model(arg: ModelArg, l: usize) -> Result<xld_core::ValuationModel, Error> {
    if l < 2 {
        return Err(Error::InvalidParameter("need l >= 2".into()));
    }
    Ok(match arg {
        ModelArg::Trivial => xld_core::ValuationModel::trivial(l - 2),
        ModelArg::Hyperplane => {
            if l < 3 {
                return Err(Error::InvalidModel(
                    "divisorial models need l >= 3".into(),
                ));
            }
            xld_core::ValuationModel::hyperplane_order(l - 2)
        }
        ModelArg::PointBlowup => {
            if l < 3 {
                return Err(Error::InvalidModel(
                    "divisorial models need l >= 3".into(),
                ));
            }
            xld_core::ValuationModel::point_blowup(l - 2)
        }
    })
}

fn parse_weight_vector(text: &str) -> Result<Vec<i64>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidParameter(format!("bad weight entry: {part:?}")))
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::InvalidParameter(format!("bad rational: {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(text.trim()).map_err(|_| bad())?,
        )),
    }
}

/// The full list of golden cases; shared by `golden --bless` and the
/// regression tests.
pub(crate) const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("diamond_smooth_7_3.json", &["diamond", "--smooth", "7", "3"]),
    ("diamond_xld_3_3.json", &["diamond", "--xld", "3", "3"]),
    ("diamond_xld_2_2.json", &["diamond", "--xld", "2", "2"]),
    ("diamond_append_4_3_1.json", &["diamond", "--append", "4", "3", "1"]),
    ("diamond_append_1_3_2.json", &["diamond", "--append", "1", "3", "2"]),
    ("ih_2_3.json", &["ih", "2", "3"]),
    ("ih_3_3.json", &["ih", "3", "3"]),
    ("lattice_2_2_deg_2.json", &["lattice", "2", "2", "--degree", "2"]),
    ("lattice_2_2_count_4.json", &["lattice", "2", "2", "--count-by-phi", "4"]),
    ("stability_t1_2_3.json", &["stability", "t1", "2", "3"]),
    ("stability_aut_2_3.json", &["stability", "aut", "2", "3"]),
    ("kvol_beta_6_6.json", &["kvol", "beta", "--lmax", "6", "--dmax", "6"]),
    (
        "kvol_svalue_3_2_hyperplane.json",
        &["kvol", "svalue", "3", "2", "--model", "hyperplane"],
    ),
    ("kvol_delta_3_3.json", &["kvol", "delta", "3", "3"]),
];

fn golden(bless: bool, dir: &PathBuf) -> Result<Report, Error> {
    let mut checked = Vec::new();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN_CASES {
        let mut argv = vec!["xld"];
        argv.extend_from_slice(args);
        let case =
            Cli::try_parse_from(&argv).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let mut text = run(&case)?;
        if !text.ends_with('\n') {
            text.push('\n');
        }
        let path = dir.join(name);
        if bless {
            fs::create_dir_all(dir)
                .and_then(|_| fs::write(&path, &text))
                .map_err(|e| Error::InvalidParameter(format!("cannot write {name}: {e}")))?;
        } else {
            let existing = fs::read_to_string(&path)
                .map_err(|e| Error::InvalidParameter(format!("cannot read {name}: {e}")))?;
            if existing != text {
                mismatched.push(*name);
            }
        }
        checked.push(*name);
    }
    if !mismatched.is_empty() {
        return Err(Error::OracleMismatch(format!(
            "golden files differ: {mismatched:?}"
        )));
    }
    Ok(render::golden_report(&checked, bless))
}
