use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cartan_core::proper_maps::NeilSource;
use cartan_core::suite::DEFAULT_SEED;
use cartan_core::{Complex64, DomainId, MapId};

#[derive(Debug, Parser)]
#[command(name = "cartan", version, about = "Cartan domains, 2-proper maps and their quotients")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every subcommand. Each also reads `CARTAN_<NAME>`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Dimension parameter n.
    #[arg(long, global = true, env = "CARTAN_N")]
    pub n: Option<usize>,
    /// Row count m for CartanI(m, n).
    #[arg(long, global = true, env = "CARTAN_M")]
    pub m: Option<usize>,
    /// Random seed.
    #[arg(long, global = true, env = "CARTAN_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Tolerance; each subcommand documents its default.
    #[arg(long, global = true, env = "CARTAN_TOL")]
    pub tol: Option<f64>,
    /// Sample count; each subcommand documents its default.
    #[arg(long, global = true, env = "CARTAN_SAMPLES")]
    pub samples: Option<usize>,
    #[arg(long, global = true, env = "CARTAN_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Unimodular parameter as `re,im`.
    #[arg(long, global = true, env = "CARTAN_OMEGA", value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex_opt")]
    pub omega: Option<Complex64>,
    /// Radius parameter r.
    #[arg(long, global = true, env = "CARTAN_R")]
    pub r: Option<f64>,
}

fn ser_complex_opt<S: serde::Serializer>(c: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    c.map(|c| [c.re, c.im]).serialize(s)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Membership verdict and margin of a point.
    Member {
        /// Domain name (with --n, --m, --r) or DomainId JSON.
        #[arg(long)]
        domain: String,
        /// Point JSON: [[re,im],...] or a matrix of such rows.
        #[arg(long)]
        point: String,
    },
    /// Evaluate a proper map, or a biholomorphism with --bih.
    EvalMap {
        /// Map name (with --n, --omega, --r) or MapId JSON.
        #[arg(long, required_unless_present = "bih", conflicts_with = "bih")]
        map: Option<String>,
        /// Biholomorphism tag, e.g. LL3toE.
        #[arg(long)]
        bih: Option<String>,
        /// Apply the inverse biholomorphism.
        #[arg(long, requires = "bih")]
        inverse: bool,
        #[arg(long)]
        point: String,
    },
    /// Preimages of a target point under a proper map.
    Fiber {
        #[arg(long)]
        map: String,
        /// Target point JSON.
        #[arg(long)]
        point: String,
    },
    /// Bergman kernel of the quotient domain of dimension --n.
    Kernel {
        /// `0`, `random`, or point JSON.
        #[arg(long, default_value = "0")]
        p: String,
        #[arg(long, default_value = "random")]
        q: String,
    },
    /// The explicit kernel zero for --n ≥ 3 and radius --r (default 0.8).
    LqkZero,
    /// Minimum |K| over random pairs (default 10^5 samples).
    LqkScan {
        /// Search a ball of this radius around the explicit zero instead.
        #[arg(long)]
        near: Option<f64>,
    },
    /// Run the verification suite.
    VerifySuite {
        /// Include the slow checks.
        #[arg(long)]
        all: bool,
        /// Print the manifest instead of running it.
        #[arg(long)]
        manifest: bool,
        /// Run only these check ids or modules.
        #[arg(long = "check")]
        checks: Vec<String>,
    },
    /// Monte-Carlo volume identity for --n, or the volume of --domain.
    Volume {
        #[arg(long)]
        domain: Option<String>,
    },
    /// Points of the Shilov boundary of LieBall or QuotientL.
    ShilovSample {
        #[arg(long)]
        domain: String,
        /// Report the sampled maximum-modulus ratio instead of points.
        #[arg(long)]
        ratio: bool,
    },
    /// Apply a linear Lie-ball automorphism, or its extension to the quotient.
    AutApply {
        /// {"omega":[re,im],"U":[[...]]}; defaults to omega·I of size --n.
        #[arg(long)]
        aut: Option<String>,
        #[arg(long)]
        point: String,
    },
    /// Sampled fixed points of a deck involution or an automorphism.
    FixScan {
        #[arg(long, required_unless_present = "aut", conflicts_with = "aut")]
        map: Option<String>,
        #[arg(long)]
        aut: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Member { .. } => "member",
            Command::EvalMap { .. } => "eval-map",
            Command::Fiber { .. } => "fiber",
            Command::Kernel { .. } => "kernel",
            Command::LqkZero => "lqk-zero",
            Command::LqkScan { .. } => "lqk-scan",
            Command::VerifySuite { .. } => "verify-suite",
            Command::Volume { .. } => "volume",
            Command::ShilovSample { .. } => "shilov-sample",
            Command::AutApply { .. } => "aut-apply",
            Command::FixScan { .. } => "fix-scan",
        }
    }
}

impl Global {
    pub fn need_n(&self) -> Result<usize, String> {
        self.n.ok_or_else(|| "--n is required".to_string())
    }

    fn need_r(&self) -> Result<f64, String> {
        self.r.ok_or_else(|| "--r is required".to_string())
    }

    fn omega_or_one(&self) -> Complex64 {
        self.omega.unwrap_or(Complex64::new(1.0, 0.0))
    }

    /// Domain from a name plus the global parameters, or from JSON.
    pub fn domain(&self, spec: &str) -> Result<DomainId, String> {
        if spec.trim_start().starts_with('{') {
            return serde_json::from_str(spec).map_err(|e| format!("malformed domain JSON: {e}"));
        }
        let d = match spec {
            "UnitDisc" => DomainId::UnitDisc,
            "Polydisc" => DomainId::Polydisc { n: self.need_n()? },
            "EuclideanBall" => DomainId::EuclideanBall { n: self.need_n()? },
            "Annulus" => DomainId::Annulus { r: self.need_r()? },
            "CartanI" => DomainId::CartanI {
                m: self.m.ok_or("--m is required for CartanI")?,
                n: self.need_n()?,
            },
            "CartanII" => DomainId::CartanII { n: self.need_n()? },
            "CartanIII" => DomainId::CartanIII { n: self.need_n()? },
            "LieBall" => DomainId::LieBall { n: self.need_n()? },
            "QuotientL" => DomainId::QuotientL { n: self.need_n()? },
            "Ellipsoid" => DomainId::Ellipsoid { n: self.need_n()? },
            "SymBidisc" => DomainId::SymBidisc,
            "Tetrablock" => DomainId::Tetrablock,
            "FDomain" => DomainId::FDomain,
            other => return Err(format!("unknown domain {other:?}")),
        };
        Ok(d)
    }

    /// Map from a name plus the global parameters, or from its JSON form.
    pub fn map(&self, spec: &str) -> Result<MapId, String> {
        if spec.trim_start().starts_with('{') {
            return serde_json::from_str(spec).map_err(|e| format!("malformed map JSON: {e}"));
        }
        let m = match spec {
            "DiscSquare" => MapId::DiscSquare,
            "AnnulusSquare" => MapId::AnnulusSquare { r: self.need_r()? },
            "Joukowski" => MapId::Joukowski {
                r: self.need_r()?,
                omega: self.omega_or_one(),
            },
            "BidiscSplit" => MapId::BidiscSplit,
            "BidiscSym" => MapId::BidiscSym { omega: self.omega_or_one() },
            "BallEllipsoid" => MapId::BallEllipsoid { n: self.need_n()? },
            "TetrablockPhi" => MapId::TetrablockPhi,
            "FMapPhi4" => MapId::FMapPhi4,
            "LambdaN" => MapId::LambdaN { n: self.need_n()? },
            "NeilMap" => MapId::NeilMap { source: NeilSource::Ball2 },
            other => return Err(format!("unknown map {other:?}")),
        };
        Ok(m)
    }
}
