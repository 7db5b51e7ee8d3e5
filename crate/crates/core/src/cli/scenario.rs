//! Scenario files: TOML documents naming a ring, a prism, the inputs of one
//! operation and the expected outcome.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bkmod::Cocharacter;
use crate::cli::Status;
use crate::displays::GroupDescriptor;
use crate::error::{Error, Result};
use crate::prisms::{make_bk_prism, PrismCtx};
use crate::rings::{parse_elt, CoeffRing, DeltaCtx, Elt, Mat};

/// The operation a scenario runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    PrismCheck,
    Bk,
    Display,
    Descend,
    Congruence,
    KernelLemmas,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::PrismCheck => "prism-check",
            Command::Bk => "bk",
            Command::Display => "display",
            Command::Descend => "descend",
            Command::Congruence => "congruence",
            Command::KernelLemmas => "kernel-lemmas",
        }
    }
}

/// `O_E = Z[x]/(f, p^K)` at `pi`-precision `n`. Without `f` the ring is
/// `Z_p`; with `f`, `pi` and `sigma_x` must be given too.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffSpec {
    pub p: u64,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_x: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

/// `O_E[[t_0..t_{r-1}]] / (t)^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub r: usize,
    pub m: u32,
}

/// A matrix as rows of element strings.
pub type MatSpec = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Status>,
    /// Orientation generator of the prism.
    pub e: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Extra elements tested for distinguishedness by `prism-check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    /// Banal representative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<MatSpec>,
    /// Display group element acting on `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MatSpec>,
    /// Frobenius numerator of a module given directly, with denominator `E^k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<MatSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub coeff: CoeffSpec,
    pub series: SeriesSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDescriptor>,
}

/// 1-based line and column of byte offset `pos` in `src`.
pub fn line_col(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Rebases an element-level parse error onto the quoted literal in `src`.
fn locate(src: &str, literal: &str, err: Error) -> Error {
    match (err, src.find(&format!("\"{literal}\""))) {
        (Error::Parse { col, msg, .. }, Some(pos)) => {
            let (l, c) = line_col(src, pos + 1);
            Error::Parse { line: l, col: c + col - 1, msg }
        }
        (e, _) => e,
    }
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Scenario> {
        let sc: Scenario = toml::from_str(src).map_err(|e| {
            let (line, col) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            Error::Parse { line, col, msg: e.message().to_string() }
        })?;
        sc.check_shapes()?;
        // Element strings are checked here so that errors carry file positions.
        let built = sc.build();
        if let Err(e @ Error::Parse { .. }) = built {
            let lit = sc.literals().into_iter().find(|s| sc.parse_one(s).is_err()).unwrap_or_default();
            return Err(locate(src, &lit, e));
        }
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            col: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        Scenario::parse(&src)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenarios serialize")
    }

    fn literals(&self) -> Vec<String> {
        let mut out = vec![self.e.clone()];
        out.extend(self.elements.iter().flatten().cloned());
        for m in [&self.x, &self.g, &self.f].into_iter().flatten() {
            out.extend(m.iter().flatten().cloned());
        }
        out
    }

    fn parse_one(&self, s: &str) -> Result<Elt> {
        parse_elt(&self.ring()?, s)
    }

    /// Square matrices of the group's rank, and a cocharacter of that rank.
    pub fn check_shapes(&self) -> Result<()> {
        let n = self.group.map(|g| g.rank()).or(self.mu.as_ref().map(Vec::len));
        for (name, m) in [("x", &self.x), ("g", &self.g), ("f", &self.f)] {
            if let Some(m) = m {
                let rows = m.len();
                if m.iter().any(|r| r.len() != rows) {
                    return Err(Error::Dimension(format!("{name} is not square")));
                }
                if let Some(n) = n {
                    if rows != n {
                        return Err(Error::Dimension(format!("{name} has {rows} rows, expected {n}")));
                    }
                }
            }
        }
        if let (Some(g), Some(mu)) = (self.group, &self.mu) {
            if g.rank() != mu.len() {
                return Err(Error::Dimension(format!("mu has {} weights for {g}", mu.len())));
            }
        }
        Ok(())
    }

    pub fn coeff_ring(&self) -> Result<CoeffRing> {
        let c = &self.coeff;
        match (&c.f, &c.pi, &c.sigma_x) {
            (None, None, None) => CoeffRing::zp(c.p, c.n),
            (Some(f), Some(pi), Some(s)) => CoeffRing::new(c.p, f, c.n, pi, s, c.q.unwrap_or(c.p)),
            _ => Err(Error::Validation("coeff needs all of f, pi, sigma_x or none".into())),
        }
    }

    pub fn ring(&self) -> Result<Arc<DeltaCtx>> {
        DeltaCtx::series(self.coeff_ring()?, self.series.r, self.series.m)
    }

    pub fn build(&self) -> Result<Built> {
        let ring = self.ring()?;
        let e = parse_elt(&ring, &self.e)?;
        let mat = |m: &Option<MatSpec>| -> Result<Option<Mat>> {
            m.as_ref()
                .map(|rows| {
                    let rows = rows
                        .iter()
                        .map(|r| r.iter().map(|s| parse_elt(&ring, s)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    Mat::from_rows(rows)
                })
                .transpose()
        };
        let x = mat(&self.x)?;
        let g = mat(&self.g)?;
        let f = mat(&self.f)?;
        let elements = self.elements.iter().flatten().map(|s| parse_elt(&ring, s)).collect::<Result<Vec<_>>>()?;
        let mu = self.mu.clone().map(Cocharacter::new).transpose()?;
        Ok(Built { ring, e, mu, x, g, f, elements })
    }
}

/// The parsed inputs of a scenario, before the prism is validated.
#[derive(Clone, Debug)]
pub struct Built {
    pub ring: Arc<DeltaCtx>,
    pub e: Elt,
    pub mu: Option<Cocharacter>,
    pub x: Option<Mat>,
    pub g: Option<Mat>,
    pub f: Option<Mat>,
    pub elements: Vec<Elt>,
}

impl Built {
    pub fn prism(&self) -> Result<PrismCtx> {
        make_bk_prism(&self.ring, self.e.clone())
    }
}

/// Every `*.scn` file of `dir`, sorted by file name.
pub fn catalog_files(dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let rd =
        std::fs::read_dir(dir).map_err(|e| Error::Parse { line: 0, col: 0, msg: format!("{}: {e}", dir.display()) })?;
    let mut out: Vec<_> =
        rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "scn")).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GL2: &str = r#"
id = "gl2"
command = "descend"
expect = "verified"
e = "2 + t"
mu = [1, 0]
depth = 2
x = [["1 + t", "t"], ["2 + t^2", "1"]]

[coeff]
p = 2
n = 3

[series]
r = 1
m = 4

[group]
kind = "gl"
n = 2
"#;

    #[test]
    fn round_trip() {
        let sc = Scenario::parse(GL2).unwrap();
        assert_eq!(sc.group, Some(GroupDescriptor::Gl(2)));
        let again = Scenario::parse(&sc.to_toml()).unwrap();
        assert_eq!(again, sc);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let bad = GL2.replace("depth = 2", "depth = = 2");
        match Scenario::parse(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn element_errors_carry_positions() {
        let bad = GL2.replace("\"2 + t^2\"", "\"2 + s^2\"");
        match Scenario::parse(&bad) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 8);
                let l = bad.lines().nth(7).unwrap();
                assert_eq!(l.chars().nth(col - 1), Some('s'));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let bad = GL2.replace("mu = [1, 0]", "mu = [1, 0, 0]");
        assert!(matches!(Scenario::parse(&bad), Err(Error::Dimension(_))));
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }
}
