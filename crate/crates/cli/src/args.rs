use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use defect_walk::walk::WalkParams;
use defect_walk::{Complex64, Eta};

/// Largest deviation of `|α|² + |β|²` from 1 tolerated without `--normalize`.
pub const INGEST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Defect phase φ in [0, 1), as a decimal or an exact fraction p/q
    #[arg(long, value_parser = parse_phi, default_value = "0.5")]
    pub phi: f64,

    /// Chiral preset ᵀ[1/√2, ηi/√2]; the default when no state is given
    #[arg(long, allow_hyphen_values = true, value_parser = parse_eta, conflicts_with_all = ["alpha", "beta"])]
    pub eta: Option<Eta>,

    /// Initial α as re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, requires = "beta")]
    pub alpha: Option<Complex64>,

    /// Initial β as re,im
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, requires = "alpha")]
    pub beta: Option<Complex64>,

    /// Rescale (α, β) to unit norm instead of rejecting it
    #[arg(long)]
    pub normalize: bool,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn params(&self) -> Result<WalkParams> {
        let (alpha, beta) = match (self.alpha, self.beta) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Ok(WalkParams::preset(self.phi, self.eta.unwrap_or(Eta::Plus))?);
            }
        };
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !self.normalize && (norm.is_nan() || (norm - 1.0).abs() > INGEST_TOL) {
            bail!(
                "initial state not normalized: |alpha|^2 + |beta|^2 = {norm} (pass --normalize to rescale)"
            );
        }
        Ok(WalkParams::normalized(self.phi, alpha, beta)?)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

/// Decimal or `p/q`, checked against `[0, 1)`.
pub fn parse_phi(s: &str) -> Result<f64> {
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
            let q: i64 = q.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
            if q <= 0 {
                bail!("denominator of {s:?} must be positive");
            }
            if p.unsigned_abs() > 1 << 53 || q > 1 << 53 {
                bail!("fraction {s:?} is not exactly representable");
            }
            p as f64 / q as f64
        }
        None => s.trim().parse().with_context(|| format!("bad phase {s:?}"))?,
    };
    if !(0.0..1.0).contains(&v) {
        bail!("phase {s} outside [0, 1)");
    }
    Ok(v)
}

pub fn parse_eta(s: &str) -> Result<Eta> {
    match s.trim() {
        "1" | "+1" | "+" => Ok(Eta::Plus),
        "-1" | "-" => Ok(Eta::Minus),
        _ => bail!("eta must be 1 or -1, got {s:?}"),
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .with_context(|| format!("expected re,im, got {s:?}"))?;
    let re: f64 = re.trim().parse().with_context(|| format!("bad real part in {s:?}"))?;
    let im: f64 = im.trim().parse().with_context(|| format!("bad imaginary part in {s:?}"))?;
    if !(re.is_finite() && im.is_finite()) {
        bail!("non-finite component in {s:?}");
    }
    Ok(Complex64::new(re, im))
}
