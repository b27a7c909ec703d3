use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qftorus::C64;

#[derive(Debug, Parser)]
#[command(
    name = "qftorus",
    version,
    about = "Quasi-Fuchsian punctured torus groups in complex Fenchel-Nielsen coordinates"
)]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report generators, traces and derived parameters of one group.
    Group(GroupArgs),
    /// Trace rational pleating rays in a λ-slice and write CSV.
    Ray(RayArgs),
    /// Plot a λ-slice with its pleating rays as SVG.
    Slice(SliceArgs),
    /// Render a limit set to PPM or SVG.
    Limitset(LimitsetArgs),
    /// Measure convergence to the Maskit normal form as λ → 0.
    Maskit(MaskitArgs),
}

/// `re,im` or `re`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number or re,im pair"))
    };
    let z = match s.split_once(',') {
        Some((re, im)) => C64::new(parse(re)?, parse(im)?),
        None => C64::new(parse(s)?, 0.0),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `a,b` with `a ≤ b`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("`{s}` is not a range a,b"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{t}` is not a number"))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a <= b {
        Ok((a, b))
    } else {
        Err(format!("empty range {a},{b}"))
    }
}

/// `xmin,xmax,ymin,ymax`.
pub fn parse_viewport(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        })
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] if a < b && c < d => Ok([a, b, c, d]),
        [_, _, _, _] => Err(format!("viewport `{s}` is empty")),
        _ => Err(format!("viewport `{s}` needs xmin,xmax,ymin,ymax")),
    }
}

/// `N` or `WxH`.
pub fn parse_pixels(s: &str) -> Result<(u32, u32), String> {
    let parse = |t: &str| match t.trim().parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{t}` is not a positive pixel count")),
    };
    match s.split_once('x') {
        Some((w, h)) => Ok((parse(w)?, parse(h)?)),
        None => parse(s).map(|n| (n, n)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        })
        .collect::<Result<_, _>>()
        .map(FloatList)
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("twist").required(true).args(["tau", "mu"])))]
pub struct GroupArgs {
    /// Half-length λ as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: C64,
    /// Twist-bend τ as `re,im`; |Im τ| must be below π.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau: Option<C64>,
    /// Plumbing parameter μ; sets τ = iπ − λμ (real λ only).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub mu: Option<C64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Top,
    Bottom,
    Both,
}

#[derive(Debug, Args)]
pub struct RayOpts {
    /// Largest denominator of the slopes to trace.
    #[arg(long, default_value_t = 3)]
    pub slopes: i64,
    /// Closed interval of slopes.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-1,1")]
    pub range: (f64, f64),
    #[arg(long, value_enum, default_value_t = SideArg::Top)]
    pub side: SideArg,
    /// Continuation step; defaults to min(0.01, θ₀/100).
    #[arg(long)]
    pub step: Option<f64>,
    /// Corrector tolerance on Im tr.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Tolerance on |tr| − 2 at the endpoint.
    #[arg(long, default_value_t = 1e-9)]
    pub endpoint_tol: f64,
}

#[derive(Debug, Args)]
pub struct RayArgs {
    #[arg(long)]
    pub lambda: f64,
    #[command(flatten)]
    pub opts: RayOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("length").required(true).args(["lambda", "trT"])))]
pub struct SliceArgs {
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Trace of T at τ = 0; fixes λ through 2 coth λ = v.
    #[arg(long = "trT", id = "trT")]
    pub tr_t: Option<f64>,
    #[command(flatten)]
    pub opts: RayOpts,
    /// Plot size in pixels, `N` or `WxH`.
    #[arg(long, value_parser = parse_pixels, default_value = "800")]
    pub px: (u32, u32),
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    Ppm,
    Svg,
}

impl ImageFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Ppm => "ppm",
            ImageFormat::Svg => "svg",
        }
    }
}

#[derive(Debug, Args)]
pub struct LimitsetArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub tau: C64,
    /// Maximum word length.
    #[arg(long, default_value_t = 12)]
    pub maxlen: usize,
    /// Contraction cutoff on image diameters.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// `xmin,xmax,ymin,ymax`.
    #[arg(long, value_parser = parse_viewport, allow_hyphen_values = true, default_value = "-4,4,-4,4")]
    pub viewport: [f64; 4],
    /// Image size, `N` or `WxH`.
    #[arg(long, value_parser = parse_pixels, default_value = "800")]
    pub px: (u32, u32),
    #[arg(long, value_enum, default_value_t = ImageFormat::Ppm)]
    pub format: ImageFormat,
    /// Output file; overrides --out-dir.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for the default file name.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct MaskitArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub mu: C64,
    /// Comma-separated positive λ values.
    #[arg(long, value_parser = parse_list, default_value = "1e-1,1e-2,1e-3,1e-4")]
    pub lambdas: FloatList,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
