//! The JSON document describing one automorphism: a graph, a train-track
//! representative, an optional inverse representative and markings.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use ttcur_core::{cyclic_reduce, EdgePath, Graph, GraphMap, Marking};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

/// Images of positive edges as token lists, and optionally of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<IndexMap<String, String>>,
    pub edges: IndexMap<String, Vec<String>>,
}

/// Generator loops at a base vertex and, unless every loop is a single
/// distinct edge, the basis word of every edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingSpec {
    pub base: String,
    pub generators: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<IndexMap<String, Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<MarkingSpec>,
    pub map: MapSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_marking: Option<MarkingSpec>,
}

/// A schema or validation error located at a field of the document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    pub field: String,
    pub message: String,
}

impl FormatError {
    fn at(field: impl Into<String>, message: impl fmt::Display) -> FormatError {
        FormatError {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() || self.field == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "field `{}`: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

/// Parses a document; errors carry the field path and line/column.
pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| FormatError::at(e.path().to_string(), e.inner()))
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub name: String,
    pub f: GraphMap,
    pub marking: Marking,
    /// Inverse representative and the marking of its graph.
    pub inverse: Option<(GraphMap, Marking)>,
}

impl Automorphism {
    /// Conjugacy class in the graph of `f` of a basis word.
    pub fn circuit(&self, word: &str) -> Result<ttcur_core::Circuit, ttcur_core::Error> {
        self.marking.circuit_of(self.f.graph(), word)
    }

    /// The same class in the graph of the inverse representative.
    pub fn inverse_circuit(
        &self,
        word: &str,
    ) -> Option<Result<ttcur_core::Circuit, ttcur_core::Error>> {
        self.inverse
            .as_ref()
            .map(|(g, m)| m.circuit_of(g.graph(), word))
    }
}

fn tokens(words: &[String]) -> String {
    words.join(",")
}

fn build_graph(
    name: &str,
    field: &str,
    vertices: &[String],
    edges: &[EdgeSpec],
) -> Result<Graph, FormatError> {
    let triples: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|e| (e.name.as_str(), e.from.as_str(), e.to.as_str()))
        .collect();
    let vertices: Vec<&str> = vertices.iter().map(String::as_str).collect();
    Graph::new(name, &vertices, &triples).map_err(|e| FormatError::at(field, e))
}

fn build_map(
    name: &str,
    field: &str,
    graph: Graph,
    spec: &MapSpec,
) -> Result<GraphMap, FormatError> {
    let vertex_images = match &spec.vertices {
        None => None,
        Some(images) => {
            let mut out = vec![None; graph.vertex_count()];
            for (v, image) in images {
                let at = format!("{field}.vertices.{v}");
                let src = graph
                    .vertex_by_name(v)
                    .ok_or_else(|| FormatError::at(&at, format!("unknown vertex `{v}`")))?;
                let dst = graph
                    .vertex_by_name(image)
                    .ok_or_else(|| FormatError::at(&at, format!("unknown vertex `{image}`")))?;
                out[src] = Some(dst);
            }
            let missing = out.iter().position(Option::is_none);
            if let Some(v) = missing {
                return Err(FormatError::at(
                    format!("{field}.vertices"),
                    format!("no image for vertex `{}`", graph.vertex_name(v)),
                ));
            }
            Some(out.into_iter().map(Option::unwrap).collect())
        }
    };
    for (edge, word) in &spec.edges {
        let at = format!("{field}.edges.{edge}");
        graph
            .edge_by_token(edge)
            .map_err(|e| FormatError::at(&at, e))?;
        graph
            .parse_word(&tokens(word))
            .map_err(|e| FormatError::at(&at, e))?;
    }
    let words: Vec<(String, String)> = spec
        .edges
        .iter()
        .map(|(e, w)| (e.clone(), tokens(w)))
        .collect();
    GraphMap::from_words(name, graph, vertex_images, &words)
        .map_err(|e| FormatError::at(format!("{field}.edges"), e))
}

fn build_marking(
    field: &str,
    graph: &Graph,
    spec: Option<&MarkingSpec>,
) -> Result<Marking, FormatError> {
    match spec {
        None if graph.is_rose() => Marking::identity(graph).map_err(|e| FormatError::at(field, e)),
        None => Err(FormatError::at(
            field,
            "graphs other than roses need a marking",
        )),
        Some(m) => {
            let generators: Vec<(String, String)> = m
                .generators
                .iter()
                .map(|(x, w)| (x.clone(), tokens(w)))
                .collect();
            let edges: Option<Vec<(String, String)>> = m
                .edges
                .as_ref()
                .map(|e| e.iter().map(|(x, w)| (x.clone(), tokens(w))).collect());
            Marking::new(graph, &m.base, &generators, edges.as_deref())
                .map_err(|e| FormatError::at(field, e))
        }
    }
}

impl Document {
    /// Validates the document and builds the maps and markings.
    pub fn build(&self) -> Result<Automorphism, FormatError> {
        let graph = build_graph(&self.name, "edges", &self.vertices, &self.edges)?;
        let marking = build_marking("marking", &graph, self.marking.as_ref())?;
        let f = build_map(&self.name, "map", graph.clone(), &self.map)?;
        let inverse = match &self.inverse_map {
            None => {
                if self.inverse_graph.is_some() || self.inverse_marking.is_some() {
                    return Err(FormatError::at(
                        "inverse_map",
                        "inverse graph or marking given without an inverse map",
                    ));
                }
                None
            }
            Some(spec) => {
                let name = format!("{}-inverse", self.name);
                let (h, m) = match &self.inverse_graph {
                    None => (graph.clone(), marking.clone()),
                    Some(gs) => {
                        let h = build_graph(&name, "inverse_graph.edges", &gs.vertices, &gs.edges)?;
                        let m =
                            build_marking("inverse_marking", &h, self.inverse_marking.as_ref())?;
                        (h, m)
                    }
                };
                let g = build_map(&name, "inverse_map", h, spec)?;
                Some((g, m))
            }
        };
        let aut = Automorphism {
            name: self.name.clone(),
            f,
            marking,
            inverse,
        };
        check_inverse(&aut)?;
        Ok(aut)
    }
}

/// `g ∘ f` must fix the conjugacy class of every basis word of length at
/// most two. This catches a wrong inverse without deciding innerness.
fn check_inverse(aut: &Automorphism) -> Result<(), FormatError> {
    let Some((g, gm)) = &aut.inverse else {
        return Ok(());
    };
    let basis = aut.marking.basis();
    for word in basis.reduced_paths_up_to(2) {
        let Ok((class, _)) = cyclic_reduce(basis, &word) else {
            continue;
        };
        let there = aut.f.apply(&aut.marking.to_graph(&word));
        let back = g.apply(&gm.to_graph(&aut.marking.to_basis(&there)));
        let round = gm.to_basis(&back);
        match cyclic_reduce(basis, &round) {
            Ok((c, _)) if c == class => {}
            _ => {
                let w = basis.format_path(&word);
                return Err(FormatError::at(
                    "inverse_map",
                    format!("does not invert the map on the class of `{w}`"),
                ));
            }
        }
    }
    Ok(())
}

/// Parses and validates in one go.
pub fn load(text: &str) -> Result<(Document, Automorphism), FormatError> {
    let doc = parse_document(text)?;
    let aut = doc.build()?;
    Ok((doc, aut))
}

/// Basis word of a path in the graph of `f`, formatted.
pub fn basis_word(aut: &Automorphism, p: &EdgePath) -> String {
    aut.marking.basis().format_path(&aut.marking.to_basis(p))
}
