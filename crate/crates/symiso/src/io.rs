//! The JSON graph and placement file format.
//!
//! ```json
//! {
//!   "vertices": 5,
//!   "edges": [[1, 2], [2, 3], [3, 4], [4, 1], [0, 1], [0, 2], [0, 3], [0, 4]],
//!   "group": "CsPreserving",
//!   "action": [0, 3, 4, 1, 2],
//!   "norm": { "phi1": ["1", "0"], "phi2": ["0", "1"] }
//! }
//! ```
//!
//! Placement files add `coords`, `tau` and `certificate`. Rationals are
//! strings `"p/q"` or `"p"`.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use symiso_core::polynorm::{FacetClass, LinearIsometry, Matrix2, Point, QuadNorm, Rational};
use symiso_core::{Edge, Graph, GroupCase, SymmetricGraph, SymmetricPlacement};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct NormSpec {
    pub phi1: [String; 2],
    pub phi2: [String; 2],
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ColouredEdge {
    pub edge: [usize; 2],
    pub class: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub method: String,
    pub rank: usize,
    pub tree1: Vec<[usize; 2]>,
    pub tree2: Vec<[usize; 2]>,
    pub coloring: Vec<ColouredEdge>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub group: String,
    pub action: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<[[String; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| anyhow!("not an exact rational: {s:?}"))?;
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn load(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse(text: &str) -> Result<GraphFile> {
    let file: GraphFile = serde_json::from_str(text)?;
    Ok(file)
}

pub fn to_json(file: &GraphFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("serialisable");
    s.push('\n');
    s
}

pub fn parse_group(s: &str) -> Result<GroupCase> {
    s.parse::<GroupCase>().map_err(|e| anyhow!(e))
}

impl GraphFile {
    /// The symmetric graph, with an optional group override.
    pub fn symmetric_graph(&self, group: Option<GroupCase>) -> Result<SymmetricGraph> {
        let case = match group {
            Some(c) => c,
            None => parse_group(&self.group)?,
        };
        let graph = Graph::new(self.vertices, self.edges.iter().map(|e| (e[0], e[1])))?;
        if self.action.len() != self.vertices {
            bail!(
                "action has {} entries for {} vertices",
                self.action.len(),
                self.vertices
            );
        }
        Ok(SymmetricGraph::new(graph, case, self.action.clone())?)
    }

    pub fn norm(&self) -> Result<QuadNorm> {
        match &self.norm {
            Some(spec) => norm_from_spec(spec),
            None => Ok(QuadNorm::linf()),
        }
    }

    pub fn points(&self) -> Result<Option<Vec<Point>>> {
        let Some(coords) = &self.coords else {
            return Ok(None);
        };
        if coords.len() != self.vertices {
            bail!(
                "{} coordinates for {} vertices",
                coords.len(),
                self.vertices
            );
        }
        coords
            .iter()
            .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn tau_matrix(&self) -> Result<Option<Matrix2>> {
        let Some(t) = &self.tau else {
            return Ok(None);
        };
        Ok(Some([
            [parse_rational(&t[0][0])?, parse_rational(&t[0][1])?],
            [parse_rational(&t[1][0])?, parse_rational(&t[1][1])?],
        ]))
    }

    pub fn from_graph(sg: &SymmetricGraph, norm: Option<&QuadNorm>) -> Self {
        GraphFile {
            vertices: sg.graph().order(),
            edges: sg.graph().edges().iter().map(|e| [e.u(), e.v()]).collect(),
            group: sg.case().name().to_string(),
            action: sg.generator().to_vec(),
            norm: norm.map(norm_spec),
            coords: None,
            tau: None,
            certificate: None,
        }
    }

    pub fn from_placement(sg: &SymmetricGraph, norm: &QuadNorm, sp: &SymmetricPlacement) -> Self {
        let mut f = GraphFile::from_graph(sg, Some(norm));
        f.coords = Some(
            sp.placement
                .coords
                .iter()
                .map(|p| [format_rational(&p.x), format_rational(&p.y)])
                .collect(),
        );
        f.tau = Some(matrix_strings(&sp.tau.matrix));
        let edges =
            |s: &std::collections::BTreeSet<Edge>| s.iter().map(|e| [e.u(), e.v()]).collect();
        f.certificate = Some(Certificate {
            method: sp.method.to_string(),
            rank: sp.report.rank,
            tree1: edges(&sp.pair.tree1),
            tree2: edges(&sp.pair.tree2),
            coloring: sp
                .coloring
                .classes
                .iter()
                .map(|(e, c)| ColouredEdge {
                    edge: [e.u(), e.v()],
                    class: class_name(*c).to_string(),
                })
                .collect(),
        });
        f
    }
}

pub fn class_name(c: FacetClass) -> &'static str {
    match c {
        FacetClass::F1 => "F1",
        FacetClass::F2 => "F2",
    }
}

fn matrix_strings(m: &Matrix2) -> [[String; 2]; 2] {
    [
        [format_rational(&m[0][0]), format_rational(&m[0][1])],
        [format_rational(&m[1][0]), format_rational(&m[1][1])],
    ]
}

pub fn norm_spec(norm: &QuadNorm) -> NormSpec {
    let f = |p: &[Rational; 2]| [format_rational(&p[0]), format_rational(&p[1])];
    NormSpec {
        phi1: f(norm.phi1()),
        phi2: f(norm.phi2()),
    }
}

pub fn norm_from_spec(spec: &NormSpec) -> Result<QuadNorm> {
    let pair = |p: &[String; 2]| -> Result<[Rational; 2]> {
        Ok([parse_rational(&p[0])?, parse_rational(&p[1])?])
    };
    Ok(QuadNorm::new(pair(&spec.phi1)?, pair(&spec.phi2)?)?)
}

/// `linf`, `l1`, or `a,b;c,d` giving the two functionals.
pub fn parse_norm_arg(s: &str) -> Result<QuadNorm> {
    match s.trim().to_ascii_lowercase().as_str() {
        "linf" | "l-inf" | "max" => return Ok(QuadNorm::linf()),
        "l1" | "diamond" => return Ok(QuadNorm::l1()),
        _ => {}
    }
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 2 {
        bail!("norm must be linf, l1 or 'a,b;c,d'");
    }
    let pair = |p: &str| -> Result<[Rational; 2]> {
        let xs: Vec<&str> = p.split(',').collect();
        if xs.len() != 2 {
            bail!("functional {p:?} needs two coefficients");
        }
        Ok([parse_rational(xs[0])?, parse_rational(xs[1])?])
    };
    Ok(QuadNorm::new(pair(parts[0])?, pair(parts[1])?)?)
}

/// The isometry of `norm` with the given matrix.
pub fn isometry(norm: &QuadNorm, m: &Matrix2) -> Result<LinearIsometry> {
    norm.isometry_from_matrix(m)
        .ok_or_else(|| anyhow!("tau is not a linear isometry of the norm"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        for s in ["3/4", "-2", "0", "10/5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn norm_arguments() {
        assert_eq!(parse_norm_arg("linf").unwrap(), QuadNorm::linf());
        assert_eq!(parse_norm_arg("l1").unwrap(), QuadNorm::l1());
        let n = parse_norm_arg("1,0;1,1").unwrap();
        assert!(n
            .isometries_of(symiso_core::IsometryClass::QuarterTurn)
            .is_empty());
        assert!(parse_norm_arg("1,0;2,0").is_err());
    }
}
