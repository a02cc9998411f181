//! SystemJSON: a constraint system together with its graph, with
//! coefficients keyed by edge label.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use stp_core::facets::{ConstraintSystem, Inequality, Provenance, Sense};
use stp_core::graph::{Graph, GraphBuilder};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub graph: GraphJson,
    pub dimension: usize,
    pub equalities: Vec<RowJson>,
    pub inequalities: Vec<RowJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: usize,
    pub u: String,
    pub v: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub coeffs: Coeffs,
    pub sense: String,
    pub rhs: i64,
    pub provenance: ProvenanceJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub kind: String,
    #[serde(default)]
    pub subset: Vec<String>,
}

/// Label → coefficient, kept in edge-id order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coeffs(pub Vec<(String, i64)>);

impl Serialize for Coeffs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Coeffs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Coeffs;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from edge label to integer")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Coeffs, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, i64>()? {
                    out.push((k, v));
                }
                Ok(Coeffs(out))
            }
        }
        d.deserialize_map(V)
    }
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    id: e.id,
                    u: g.vertex_label(e.u).to_string(),
                    v: g.vertex_label(e.v).to_string(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, CliError> {
        let mut b = GraphBuilder::new();
        for v in &self.vertices {
            b.vertex(v.clone());
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.id != i {
                return Err(CliError::Parse(format!("edge ids must be 0..m in order, found {} at {i}", e.id)));
            }
            if e.u == e.v {
                return Err(CliError::Parse(format!("edge `{}` is a loop", e.label)));
            }
            b.labeled_edge(e.u.clone(), e.v.clone(), e.label.clone());
        }
        let g = b.build().map_err(|e| CliError::Parse(e.to_string()))?;
        if g.n() != self.vertices.len() {
            return Err(CliError::Parse("edges mention undeclared vertices".into()));
        }
        Ok(g)
    }
}

fn provenance_to_json(g: &Graph, p: &Provenance) -> ProvenanceJson {
    let edges = |v: &[usize]| g.edge_labels(v.iter().copied());
    let vertices = |v: &[usize]| g.vertex_labels(v.iter().copied());
    let (kind, subset) = match p {
        Provenance::ParallelClosure(s) => ("parallel", edges(s)),
        Provenance::CoparallelClosure(s) => ("coparallel", edges(s)),
        Provenance::LockedSubset(s) => ("locked-subset", edges(s)),
        Provenance::LockedSubgraph(u) => ("locked-subgraph", vertices(u)),
        Provenance::Nonnegativity(e) => ("nonnegativity", edges(&[*e])),
        Provenance::RankBound(u) => ("rank-bound", vertices(u)),
        Provenance::Bridge(e) => ("bridge", edges(&[*e])),
        Provenance::Cardinality => ("cardinality", vec![]),
        Provenance::External => ("external", vec![]),
        Provenance::ComplementForm(inner) => {
            let j = provenance_to_json(g, inner);
            return ProvenanceJson {
                kind: format!("complement-{}", j.kind),
                subset: j.subset,
            };
        }
    };
    ProvenanceJson {
        kind: kind.into(),
        subset,
    }
}

fn provenance_from_json(g: &Graph, p: &ProvenanceJson) -> Result<Provenance, CliError> {
    if let Some(inner) = p.kind.strip_prefix("complement-") {
        let inner = ProvenanceJson {
            kind: inner.into(),
            subset: p.subset.clone(),
        };
        return Ok(Provenance::ComplementForm(Box::new(provenance_from_json(g, &inner)?)));
    }
    let edges = || -> Result<Vec<usize>, CliError> {
        let set = g.edge_set(&p.subset).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(set.into_iter().collect())
    };
    let vertices = || -> Result<Vec<usize>, CliError> {
        let set = g.vertex_set(&p.subset).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(set.into_iter().collect())
    };
    let single = || -> Result<usize, CliError> {
        match edges()?.as_slice() {
            [e] => Ok(*e),
            _ => Err(CliError::Parse(format!("provenance `{}` needs exactly one edge", p.kind))),
        }
    };
    Ok(match p.kind.as_str() {
        "parallel" => Provenance::ParallelClosure(edges()?),
        "coparallel" => Provenance::CoparallelClosure(edges()?),
        "locked-subset" => Provenance::LockedSubset(edges()?),
        "locked-subgraph" => Provenance::LockedSubgraph(vertices()?),
        "nonnegativity" => Provenance::Nonnegativity(single()?),
        "rank-bound" => Provenance::RankBound(vertices()?),
        "bridge" => Provenance::Bridge(single()?),
        "cardinality" => Provenance::Cardinality,
        "external" => Provenance::External,
        other => return Err(CliError::Parse(format!("unknown provenance kind `{other}`"))),
    })
}

pub fn row_to_json(g: &Graph, q: &Inequality) -> RowJson {
    RowJson {
        coeffs: Coeffs(q.coeffs.iter().map(|(&k, &c)| (g.edge(k).label.clone(), c)).collect()),
        sense: q.sense.symbol().to_string(),
        rhs: q.rhs,
        provenance: provenance_to_json(g, &q.provenance),
    }
}

pub fn row_from_json(g: &Graph, r: &RowJson) -> Result<Inequality, CliError> {
    let sense = Sense::from_symbol(&r.sense)
        .ok_or_else(|| CliError::Parse(format!("unknown sense `{}`", r.sense)))?;
    let mut coeffs = BTreeMap::new();
    for (label, c) in &r.coeffs.0 {
        let e = g
            .edge_id(label)
            .ok_or_else(|| CliError::Parse(format!("unknown edge label `{label}`")))?;
        if coeffs.insert(e, *c).is_some() {
            return Err(CliError::Parse(format!("edge label `{label}` repeated in a row")));
        }
    }
    Ok(Inequality::new(coeffs, sense, r.rhs, provenance_from_json(g, &r.provenance)?))
}

pub fn system_to_json(g: &Graph, sys: &ConstraintSystem) -> SystemJson {
    SystemJson {
        graph: GraphJson::from_graph(g),
        dimension: sys.dimension,
        equalities: sys.equalities.iter().map(|q| row_to_json(g, q)).collect(),
        inequalities: sys.inequalities.iter().map(|q| row_to_json(g, q)).collect(),
    }
}

/// Reads rows against `g`, which must carry every label the rows use.
pub fn system_from_json(g: &Graph, j: &SystemJson) -> Result<ConstraintSystem, CliError> {
    let rows = |rs: &[RowJson]| rs.iter().map(|r| row_from_json(g, r)).collect::<Result<Vec<_>, _>>();
    Ok(ConstraintSystem {
        inequalities: rows(&j.inequalities)?,
        equalities: rows(&j.equalities)?,
        dimension: j.dimension,
    })
}

pub fn to_string(g: &Graph, sys: &ConstraintSystem) -> String {
    serde_json::to_string_pretty(&system_to_json(g, sys)).expect("SystemJSON serializes")
}

/// Parses SystemJSON, returning its own graph and system.
pub fn from_str(text: &str) -> Result<(Graph, ConstraintSystem), CliError> {
    let j: SystemJson = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("SystemJSON: {e}")))?;
    let g = j.graph.to_graph()?;
    let sys = system_from_json(&g, &j)?;
    Ok((g, sys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use stp_core::facets::{alternative_system, spanning_tree_polytope_system, Selection};
    use stp_core::fixtures;

    #[test]
    fn round_trip() {
        for g in [fixtures::ce(), fixtures::complete(4), fixtures::path(&["a", "b", "c"]), fixtures::multi_edge(2)] {
            let sys = spanning_tree_polytope_system(&g).unwrap().system;
            let (g2, sys2) = from_str(&to_string(&g, &sys)).unwrap();
            assert_eq!(g2, g);
            assert_eq!(sys2, sys);
            let alt = alternative_system(&sys, &Selection::default()).unwrap();
            let (_, alt2) = from_str(&to_string(&g, &alt)).unwrap();
            assert_eq!(alt2, alt);
        }
    }

    #[test]
    fn shape_of_ce_output() {
        let g = fixtures::ce();
        let sys = spanning_tree_polytope_system(&g).unwrap().system;
        let v: serde_json::Value = serde_json::from_str(&to_string(&g, &sys)).unwrap();
        assert_eq!(v["inequalities"].as_array().unwrap().len(), 12);
        assert_eq!(v["equalities"].as_array().unwrap().len(), 1);
        assert_eq!(v["dimension"], 7);
        assert_eq!(v["equalities"][0]["rhs"], 5);
        let locked: Vec<_> = v["inequalities"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|r| r["provenance"]["kind"] == "locked-subgraph")
            .map(|r| r["provenance"]["subset"].clone())
            .collect();
        assert_eq!(locked, vec![serde_json::json!(["a", "b", "f"]), serde_json::json!(["c", "d", "e"])]);
    }

    #[test]
    fn rejects_bad_rows() {
        let g = fixtures::ce();
        let sys = spanning_tree_polytope_system(&g).unwrap().system;
        let text = to_string(&g, &sys);
        for (from, to) in [("\"<=\"", "\"<>\""), ("\"ab\": 1", "\"zz\": 1"), ("\"parallel\"", "\"mystery\"")] {
            let bad = text.replacen(from, to, 1);
            assert!(from_str(&bad).is_err(), "{from} -> {to}");
        }
    }
}
