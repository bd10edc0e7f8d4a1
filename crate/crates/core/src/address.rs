//! Text addresses for K-families and R-matrices.
//!
//! K-families: `diag:sl(n):p,q:xi=…`, `twist-const:sl(n):sym|skew`,
//! `nilpotent:sl(n):k=…`, `custom:file=PATH`. R-matrices: `yang:sl(n)`,
//! `yang-crossed:sl(n):auto-gamma`, `yang-crossed:sl(n):gamma=…`.
//! Scalars are real literals or complex literals in the matrix exchange
//! format (`1+1j`; a trailing `i` is accepted too).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::io::{format_complex, parse_complex};
use crate::kmatrix::{
    constant_twisted_k, custom_k, diagonal_k, nilpotent_k, BoundarySetup, KMatrix,
};
use crate::lie::build_sl;
use crate::linalg::{eye, re, CMat};
use crate::rmatrix::{find_crossing, yang_r};
use crate::series::MatrixSeries;
use crate::spectral::SpectralSampler;

/// Seed and count of the sample pairs used to verify an automatically found `Γ`.
const CROSSING_VERIFY: (u64, usize) = (5, 20);

fn bad(addr: &str, why: &str) -> Error {
    Error::Parse(format!("address '{addr}': {why}"))
}

/// Parses `sl(n)`.
pub fn parse_algebra(s: &str) -> Result<usize> {
    let n = s
        .strip_prefix("sl(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|r| r.parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("algebra '{s}' is not of the form sl(n)")))?;
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "sl(n) needs n ≥ 2, got {n}"
        )));
    }
    Ok(n)
}

pub fn parse_scalar(s: &str) -> Result<Complex64> {
    if let Ok(x) = s.parse::<f64>() {
        return Ok(re(x));
    }
    let j = match s.strip_suffix('i') {
        Some(body) => format!("{body}j"),
        None => s.to_string(),
    };
    parse_complex(&j).map_err(|_| Error::Parse(format!("bad scalar '{s}'")))
}

fn format_scalar(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format_complex(z)
    }
}

fn keyed<'a>(addr: &str, part: &'a str, key: &str) -> Result<&'a str> {
    part.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| bad(addr, &format!("expected '{key}=…'")))
}

/// The standard symplectic form `⊕ [[0, 1], [−1, 0]]`.
pub fn symplectic_form(n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for b in 0..n / 2 {
        m[(2 * b, 2 * b + 1)] = re(1.0);
        m[(2 * b + 1, 2 * b)] = re(-1.0);
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyAddress {
    Diagonal {
        n: usize,
        p: usize,
        q: usize,
        xi: Complex64,
    },
    TwistConst {
        n: usize,
        skew: bool,
    },
    Nilpotent {
        n: usize,
        k: usize,
    },
    Custom {
        file: PathBuf,
    },
}

impl FromStr for FamilyAddress {
    type Err = Error;

    fn from_str(addr: &str) -> Result<Self> {
        let parts: Vec<&str> = addr.split(':').collect();
        match parts.as_slice() {
            ["diag", alg, pq, rest @ ..] => {
                let n = parse_algebra(alg)?;
                let (p, q) = pq
                    .split_once(',')
                    .and_then(|(p, q)| Some((p.parse().ok()?, q.parse().ok()?)))
                    .ok_or_else(|| bad(addr, "expected 'p,q'"))?;
                let xi = match rest {
                    [] => re(0.0),
                    [x] => parse_scalar(keyed(addr, x, "xi")?)?,
                    _ => return Err(bad(addr, "too many fields")),
                };
                Ok(FamilyAddress::Diagonal { n, p, q, xi })
            }
            ["twist-const", alg, kind] => {
                let skew = match *kind {
                    "sym" => false,
                    "skew" => true,
                    _ => return Err(bad(addr, "expected 'sym' or 'skew'")),
                };
                Ok(FamilyAddress::TwistConst {
                    n: parse_algebra(alg)?,
                    skew,
                })
            }
            ["nilpotent", alg, k] => {
                let k = keyed(addr, k, "k")?
                    .parse()
                    .map_err(|_| bad(addr, "k must be a positive integer"))?;
                Ok(FamilyAddress::Nilpotent {
                    n: parse_algebra(alg)?,
                    k,
                })
            }
            ["custom", file] => Ok(FamilyAddress::Custom {
                file: PathBuf::from(keyed(addr, file, "file")?),
            }),
            // Paths may themselves contain ':'.
            ["custom", first, more @ ..] => {
                let file = format!("{}:{}", keyed(addr, first, "file")?, more.join(":"));
                Ok(FamilyAddress::Custom {
                    file: PathBuf::from(file),
                })
            }
            _ => Err(bad(addr, "unknown K-family")),
        }
    }
}

impl fmt::Display for FamilyAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyAddress::Diagonal { n, p, q, xi } => {
                write!(f, "diag:sl({n}):{p},{q}:xi={}", format_scalar(*xi))
            }
            FamilyAddress::TwistConst { n, skew } => {
                write!(
                    f,
                    "twist-const:sl({n}):{}",
                    if *skew { "skew" } else { "sym" }
                )
            }
            FamilyAddress::Nilpotent { n, k } => write!(f, "nilpotent:sl({n}):k={k}"),
            FamilyAddress::Custom { file } => write!(f, "custom:file={}", file.display()),
        }
    }
}

impl FamilyAddress {
    /// `n` of the ambient `sl(n)`, when the address states it.
    pub fn rank_hint(&self) -> Option<usize> {
        match self {
            FamilyAddress::Diagonal { n, .. }
            | FamilyAddress::TwistConst { n, .. }
            | FamilyAddress::Nilpotent { n, .. } => Some(*n),
            FamilyAddress::Custom { .. } => None,
        }
    }

    /// Builds the K-matrix; custom files are read as a matrix series over the
    /// defining representation on both legs.
    pub fn build(&self) -> Result<KMatrix> {
        match self {
            FamilyAddress::Diagonal { n, p, q, xi } => diagonal_k(*n, *p, *q, *xi),
            FamilyAddress::TwistConst { n, skew } => {
                let kappa = if *skew { symplectic_form(*n) } else { eye(*n) };
                constant_twisted_k(*n, kappa)
            }
            FamilyAddress::Nilpotent { n, k } => nilpotent_k(*n, *k),
            FamilyAddress::Custom { file } => {
                let text = std::fs::read_to_string(file)?;
                let series = MatrixSeries::from_text(&text)?;
                let (d, cols) = series.shape();
                if d != cols {
                    return Err(Error::ShapeMismatch(format!(
                        "custom series must be square, got {d}×{cols}"
                    )));
                }
                let (_, rep) = build_sl(d)?;
                custom_k(&series, rep.clone(), rep)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Auto,
    Value(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RAddress {
    Yang { n: usize },
    YangCrossed { n: usize, gamma: GammaSpec },
}

impl FromStr for RAddress {
    type Err = Error;

    fn from_str(addr: &str) -> Result<Self> {
        match addr.split(':').collect::<Vec<_>>().as_slice() {
            ["yang", alg] => Ok(RAddress::Yang {
                n: parse_algebra(alg)?,
            }),
            ["yang-crossed", alg, g] => {
                let gamma = if *g == "auto-gamma" {
                    GammaSpec::Auto
                } else {
                    GammaSpec::Value(parse_scalar(keyed(addr, g, "gamma")?)?)
                };
                Ok(RAddress::YangCrossed {
                    n: parse_algebra(alg)?,
                    gamma,
                })
            }
            _ => Err(bad(addr, "unknown R-matrix")),
        }
    }
}

impl fmt::Display for RAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RAddress::Yang { n } => write!(f, "yang:sl({n})"),
            RAddress::YangCrossed {
                n,
                gamma: GammaSpec::Auto,
            } => write!(f, "yang-crossed:sl({n}):auto-gamma"),
            RAddress::YangCrossed {
                n,
                gamma: GammaSpec::Value(g),
            } => {
                write!(f, "yang-crossed:sl({n}):gamma={}", format_scalar(*g))
            }
        }
    }
}

impl RAddress {
    /// The address matching `k`: crossed exactly when `k` is twisted.
    pub fn default_for(k: &KMatrix) -> Self {
        let n = k.d();
        if k.twisted() {
            RAddress::YangCrossed {
                n,
                gamma: GammaSpec::Auto,
            }
        } else {
            RAddress::Yang { n }
        }
    }

    pub fn n(&self) -> usize {
        match self {
            RAddress::Yang { n } | RAddress::YangCrossed { n, .. } => *n,
        }
    }

    /// Resolves `Γ`, searching for it when requested.
    pub fn gamma(&self) -> Result<Option<Complex64>> {
        match self {
            RAddress::Yang { .. } => Ok(None),
            RAddress::YangCrossed {
                gamma: GammaSpec::Value(g),
                ..
            } => Ok(Some(*g)),
            RAddress::YangCrossed {
                n,
                gamma: GammaSpec::Auto,
            } => {
                let (seed, count) = CROSSING_VERIFY;
                Ok(Some(
                    find_crossing(*n, &SpectralSampler::new(seed).pairs(count))?.gamma,
                ))
            }
        }
    }

    /// The reflection-equation setup for `k`, after checking that the
    /// address fits its dimension and twisting.
    pub fn setup_for(&self, k: &KMatrix) -> Result<BoundarySetup> {
        if self.n() != k.d() {
            return Err(Error::InvalidArgument(format!(
                "R-matrix {self} does not act on the K-matrix space C^{}",
                k.d()
            )));
        }
        let crossed = matches!(self, RAddress::YangCrossed { .. });
        if crossed != k.twisted() {
            let want = if k.twisted() {
                "a crossed"
            } else {
                "an uncrossed"
            };
            return Err(Error::InvalidArgument(format!(
                "K-matrix needs {want} R-matrix, got {self}"
            )));
        }
        // Builds the same R the setup will use, so invalid n surfaces here.
        yang_r(self.n())?;
        BoundarySetup::yang_for(k, self.gamma()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn family_round_trip() {
        for s in [
            "diag:sl(3):2,1:xi=0.7",
            "diag:sl(4):2,2:xi=1+1j",
            "twist-const:sl(3):sym",
            "twist-const:sl(4):skew",
            "nilpotent:sl(4):k=1",
            "custom:file=a/b.series",
        ] {
            let a: FamilyAddress = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        let a: FamilyAddress = "diag:sl(2):1,1:xi=1+1i".parse().unwrap();
        assert_eq!(
            a,
            FamilyAddress::Diagonal {
                n: 2,
                p: 1,
                q: 1,
                xi: c64(1.0, 1.0)
            }
        );
        let a: FamilyAddress = "custom:file=C:/x.series".parse().unwrap();
        assert_eq!(
            a,
            FamilyAddress::Custom {
                file: PathBuf::from("C:/x.series")
            }
        );
    }

    #[test]
    fn family_errors() {
        for s in [
            "diag:sl(3):2:xi=1",
            "twist-const:sl(3):herm",
            "nilpotent:sl(4):1",
            "sl(3)",
            "diag:gl(3):2,1",
            "custom:path=x",
        ] {
            assert!(s.parse::<FamilyAddress>().is_err(), "{s}");
        }
        assert!(matches!(
            parse_algebra("sl(1)"),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn r_addresses() {
        for s in [
            "yang:sl(3)",
            "yang-crossed:sl(2):auto-gamma",
            "yang-crossed:sl(2):gamma=-0.25",
        ] {
            assert_eq!(s.parse::<RAddress>().unwrap().to_string(), s);
        }
        assert!("yang-crossed:sl(2)".parse::<RAddress>().is_err());
    }

    #[test]
    fn setup_matches_twisting() {
        let k = "twist-const:sl(2):sym"
            .parse::<FamilyAddress>()
            .unwrap()
            .build()
            .unwrap();
        assert!(RAddress::Yang { n: 2 }.setup_for(&k).is_err());
        assert!(RAddress::YangCrossed {
            n: 3,
            gamma: GammaSpec::Auto
        }
        .setup_for(&k)
        .is_err());
        assert!(RAddress::default_for(&k).setup_for(&k).unwrap().twisted);
    }
}
