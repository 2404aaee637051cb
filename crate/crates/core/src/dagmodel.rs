//! Graph filtrations: DAGs whose vertices carry subcomplexes of one ambient
//! complex and whose edges are inclusions.
//!
//! The JSON document format is
//!
//! ```json
//! {"simplices":[[0],[1],[0,1]],"vertices":[{"id":"X0","members":[0,1]},{"id":"X1","members":[0,1,2]}],"edges":[["X0","X1"]]}
//! ```
//!
//! `simplices` lists sorted vertex-id arrays in face order (faces before
//! cofaces); `members` index into `simplices`; vertex ids are arbitrary
//! strings. [`serialize`] emits this exact compact layout.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{GlobalComplex, Simplex, SubcomplexMask};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFiltration {
    complex: GlobalComplex,
    ids: Vec<String>,
    masks: Vec<SubcomplexMask>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl GraphFiltration {
    /// Builds the structure; masks must be face-closed subcomplexes and edge
    /// endpoints must name vertices. Acyclicity and inclusions are checked by
    /// [`validate`](Self::validate).
    pub fn new(complex: GlobalComplex, vertices: Vec<(String, SubcomplexMask)>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        let mut ids = Vec::with_capacity(vertices.len());
        let mut masks = Vec::with_capacity(vertices.len());
        for (i, (id, mask)) in vertices.into_iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
            if mask.members().last().is_some_and(|&m| m >= complex.len()) || !mask.is_closed(&complex) {
                return Err(Error::MaskNotClosed(id));
            }
            ids.push(id);
            masks.push(mask);
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= ids.len() || v >= ids.len()) {
            return Err(Error::UnknownVertex(format!("#{}", u.max(v))));
        }
        Ok(GraphFiltration { complex, ids, masks, edges, index })
    }

    /// Like [`new`](Self::new) with edges given by vertex ids.
    pub fn with_named_edges(
        complex: GlobalComplex,
        vertices: Vec<(String, SubcomplexMask)>,
        edges: &[(&str, &str)],
    ) -> Result<Self> {
        let lookup: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, (id, _))| (id.as_str(), i)).collect();
        let idx = |name: &str| lookup.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()));
        let edges = edges.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
        Self::new(complex, vertices, edges)
    }

    pub fn complex(&self) -> &GlobalComplex {
        &self.complex
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn mask(&self, v: usize) -> &SubcomplexMask {
        &self.masks[v]
    }

    pub fn masks(&self) -> &[SubcomplexMask] {
        &self.masks
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Outgoing edge ids per vertex, in edge-id order.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.ids.len()];
        for (e, &(u, _)) in self.edges.iter().enumerate() {
            out[u].push(e);
        }
        out
    }

    pub fn in_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.ids.len()];
        for (e, &(_, v)) in self.edges.iter().enumerate() {
            inc[v].push(e);
        }
        inc
    }

    /// Kahn's algorithm, smallest available vertex first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.ids.len();
        let out = self.out_edges();
        let mut indeg = vec![0usize; n];
        for &(_, v) in &self.edges {
            indeg[v] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for &e in &out[u] {
                let v = self.edges[e].1;
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        if order.len() < n {
            let done: Vec<bool> = (0..n).map(|v| order.contains(&v)).collect();
            let e = (0..self.edges.len())
                .find(|&e| !done[self.edges[e].0] && !done[self.edges[e].1])
                .expect("a cycle leaves an edge inside the residue");
            let (u, v) = self.edges[e];
            return Err(Error::CycleFound { edge: e, src: self.ids[u].clone(), dst: self.ids[v].clone() });
        }
        Ok(order)
    }

    /// Checks acyclicity, then that every edge is a subset inclusion.
    pub fn validate(&self) -> Result<()> {
        self.topological_order()?;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if let Some(simplex) = self.masks[u].first_missing_from(&self.masks[v]) {
                return Err(Error::InclusionViolated {
                    edge: e,
                    src: self.ids[u].clone(),
                    dst: self.ids[v].clone(),
                    simplex,
                });
            }
        }
        Ok(())
    }

    /// Vertices reachable from `u` by directed paths, `u` included.
    pub fn reachable_from(&self, u: usize) -> Vec<bool> {
        let out = self.out_edges();
        let mut seen = vec![false; self.ids.len()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &e in &out[x] {
                let y = self.edges[e].1;
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }
}

/// Where a vertex of a refined DAG came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    Original(usize),
    /// `step`-th intermediate space on original edge `edge` (steps from 1).
    Refinement { edge: usize, step: usize },
}

/// A graph filtration in which every edge adds at most one simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexwiseDag {
    graph: GraphFiltration,
    added: Vec<Option<usize>>,
    origin: Vec<VertexOrigin>,
    original_vertices: usize,
    chains: Vec<Vec<usize>>,
}

impl SimplexwiseDag {
    pub fn graph(&self) -> &GraphFiltration {
        &self.graph
    }

    /// Simplex added along refined edge `e`; `None` for an identity edge.
    pub fn added_simplex(&self, e: usize) -> Option<usize> {
        self.added[e]
    }

    pub fn origin(&self, v: usize) -> VertexOrigin {
        self.origin[v]
    }

    /// Number of vertices carried over from the unrefined filtration; they
    /// keep their indices `0..original_vertex_count()`.
    pub fn original_vertex_count(&self) -> usize {
        self.original_vertices
    }

    /// Refined edge ids replacing original edge `e`, in path order.
    pub fn chain(&self, e: usize) -> &[usize] {
        &self.chains[e]
    }

    pub fn original_edge_count(&self) -> usize {
        self.chains.len()
    }

    pub fn is_original(&self, v: usize) -> bool {
        v < self.original_vertices
    }
}

/// Splits each inclusion into single-simplex steps, faces first (by
/// dimension, then simplex id).
pub fn refine_to_simplexwise(gf: &GraphFiltration) -> Result<SimplexwiseDag> {
    gf.validate()?;
    let complex = gf.complex();
    let mut vertices: Vec<(String, SubcomplexMask)> =
        gf.ids.iter().cloned().zip(gf.masks.iter().cloned()).collect();
    let mut origin: Vec<VertexOrigin> = (0..vertices.len()).map(VertexOrigin::Original).collect();
    let mut edges = Vec::new();
    let mut added = Vec::new();
    let mut chains = Vec::with_capacity(gf.edges.len());
    for (e, &(u, v)) in gf.edges.iter().enumerate() {
        let mut diff = gf.masks[v].difference(&gf.masks[u]);
        diff.sort_by_key(|&id| (complex.dim_of(id), id));
        let mut chain = Vec::new();
        if diff.is_empty() {
            chain.push(edges.len());
            edges.push((u, v));
            added.push(None);
        } else {
            let mut prev = u;
            let mut mask = gf.masks[u].clone();
            for (step, &id) in diff.iter().enumerate() {
                let next = if step + 1 == diff.len() {
                    v
                } else {
                    mask = mask.union(&SubcomplexMask::from_ids_unchecked([id]));
                    vertices.push((format!("{}->{}#{}", gf.ids[u], gf.ids[v], step + 1), mask.clone()));
                    origin.push(VertexOrigin::Refinement { edge: e, step: step + 1 });
                    vertices.len() - 1
                };
                chain.push(edges.len());
                edges.push((prev, next));
                added.push(Some(id));
                prev = next;
            }
        }
        chains.push(chain);
    }
    let graph = GraphFiltration::new(complex.clone(), vertices, edges)?;
    Ok(SimplexwiseDag { graph, added, origin, original_vertices: gf.vertex_count(), chains })
}

/// A connected subgraph, given by its vertex set; edges are all graph edges
/// between selected vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphSelector {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl SubgraphSelector {
    /// Fails with [`Error::DisconnectedSelector`] unless weakly connected.
    pub fn new(gf: &GraphFiltration, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut vs: Vec<usize> = vertices.into_iter().collect();
        vs.sort_unstable();
        vs.dedup();
        if vs.is_empty() {
            return Err(Error::InvalidSelector("empty selector".into()));
        }
        if let Some(&bad) = vs.iter().find(|&&v| v >= gf.vertex_count()) {
            return Err(Error::InvalidSelector(format!("vertex index {bad} out of range")));
        }
        let inside = |v: usize| vs.binary_search(&v).is_ok();
        let edges: Vec<usize> =
            (0..gf.edge_count()).filter(|&e| inside(gf.edge(e).0) && inside(gf.edge(e).1)).collect();
        let sel = SubgraphSelector { vertices: vs, edges };
        if !sel.is_connected(gf) {
            return Err(Error::DisconnectedSelector);
        }
        Ok(sel)
    }

    pub fn from_ids(gf: &GraphFiltration, ids: &[&str]) -> Result<Self> {
        let vs = ids
            .iter()
            .map(|id| gf.vertex_index(id).ok_or_else(|| Error::InvalidSelector(format!("unknown vertex {id:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gf, vs)
    }

    pub fn whole(gf: &GraphFiltration) -> Result<Self> {
        Self::new(gf, 0..gf.vertex_count())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    fn is_connected(&self, gf: &GraphFiltration) -> bool {
        let pos: HashMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &e in &self.edges {
            let (u, v) = gf.edge(e);
            let (a, b) = (find(&mut parent, pos[&u]), find(&mut parent, pos[&v]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..self.vertices.len()).all(|i| find(&mut parent, i) == root)
    }

    /// The same subgraph in a refinement: adds the intermediate vertices of
    /// every selected original edge.
    pub fn lift(&self, dag: &SimplexwiseDag) -> SubgraphSelector {
        let mut vs = self.vertices.clone();
        for &e in &self.edges {
            for &re in dag.chain(e) {
                vs.push(dag.graph().edge(re).1);
            }
        }
        SubgraphSelector::new(dag.graph(), vs).expect("refinement keeps selectors connected")
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    #[serde(default)]
    simplices: Vec<Vec<u32>>,
    #[serde(default)]
    vertices: Vec<VertexDocument>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct VertexDocument {
    id: String,
    members: Vec<usize>,
}

pub fn parse(text: &str) -> Result<GraphFiltration> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let simplices = doc
        .simplices
        .into_iter()
        .enumerate()
        .map(|(i, vs)| {
            if vs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    location: format!("simplices[{i}]"),
                    message: format!("{vs:?} is not a strictly increasing vertex list"),
                });
            }
            Simplex::new(vs)
        })
        .collect::<Result<Vec<_>>>()?;
    let complex = GlobalComplex::from_simplices(simplices)?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.into_iter().enumerate() {
        if let Some(&bad) = v.members.iter().find(|&&m| m >= complex.len()) {
            return Err(Error::Parse {
                location: format!("vertices[{i}] ({:?})", v.id),
                message: format!("member {bad} is not a simplex index"),
            });
        }
        vertices.push((v.id, SubcomplexMask::from_ids_unchecked(v.members)));
    }
    let edges: Vec<(&str, &str)> = doc.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    GraphFiltration::with_named_edges(complex, vertices, &edges)
}

pub fn serialize(gf: &GraphFiltration) -> String {
    let doc = Document {
        simplices: gf.complex.simplices().iter().map(|s| s.vertices().to_vec()).collect(),
        vertices: gf
            .ids
            .iter()
            .zip(&gf.masks)
            .map(|(id, m)| VertexDocument { id: id.clone(), members: m.members().to_vec() })
            .collect(),
        edges: gf.edges.iter().map(|&(u, v)| (gf.ids[u].clone(), gf.ids[v].clone())).collect(),
    };
    serde_json::to_string(&doc).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn path_validates() {
        let gf = fixtures::triangle_path();
        assert!(gf.validate().is_ok());
    }

    #[test]
    fn two_cycle_detected() {
        let c = GlobalComplex::close_under_faces([Simplex::new(vec![0]).unwrap()]);
        let m = c.full_mask();
        let gf = GraphFiltration::new(c, vec![("A".into(), m.clone()), ("B".into(), m)], vec![(0, 1), (1, 0)]).unwrap();
        assert!(matches!(gf.validate(), Err(Error::CycleFound { .. })));
    }

    #[test]
    fn inclusion_violation_names_edge() {
        let c = GlobalComplex::close_under_faces([Simplex::new(vec![0, 1]).unwrap()]);
        let big = c.full_mask();
        let small = SubcomplexMask::from_ids_unchecked([0]);
        let gf = GraphFiltration::new(c, vec![("A".into(), big), ("B".into(), small)], vec![(0, 1)]).unwrap();
        match gf.validate() {
            Err(Error::InclusionViolated { edge, src, dst, .. }) => {
                assert_eq!((edge, src.as_str(), dst.as_str()), (0, "A", "B"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn refinement_orders_faces_first() {
        // X0 = vertices + two edges of a triangle, X1 adds the third edge and the triangle
        let c = GlobalComplex::close_under_faces([Simplex::new(vec![0, 1, 2]).unwrap()]);
        let t = c.id_of(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        let e02 = c.id_of(&Simplex::new(vec![0, 2]).unwrap()).unwrap();
        let x0 = SubcomplexMask::from_ids_unchecked(c.full_mask().members().iter().copied().filter(|&i| i != t && i != e02));
        let gf = GraphFiltration::new(c.clone(), vec![("X0".into(), x0), ("X1".into(), c.full_mask())], vec![(0, 1)]).unwrap();
        let r = refine_to_simplexwise(&gf).unwrap();
        assert_eq!(r.chain(0).len(), 2);
        assert_eq!(r.added_simplex(r.chain(0)[0]), Some(e02));
        assert_eq!(r.added_simplex(r.chain(0)[1]), Some(t));
        assert_eq!(r.graph().vertex_count(), 3);
        assert_eq!(r.origin(2), VertexOrigin::Refinement { edge: 0, step: 1 });
        assert!(r.graph().validate().is_ok());
    }

    #[test]
    fn simplexwise_input_is_unchanged() {
        let gf = fixtures::triangle_path();
        let r = refine_to_simplexwise(&gf).unwrap();
        assert_eq!(r.graph(), &gf);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let gf = fixtures::triangle_path();
        let text = serialize(&gf);
        let back = parse(&text).unwrap();
        assert_eq!(back, gf);
        assert_eq!(serialize(&back), text);

        let bad = r#"{"simplices":[[0]],"vertices":[{"id":"A","members":[0]}],"edges":[["A","Nope"]]}"#;
        assert_eq!(parse(bad), Err(Error::UnknownVertex("Nope".into())));

        let empty = parse(r#"{"simplices":[],"vertices":[],"edges":[]}"#).unwrap();
        assert_eq!(empty.vertex_count(), 0);
        assert!(empty.validate().is_ok());

        assert!(matches!(parse("{\"simplices\": [[0], }"), Err(Error::Parse { .. })));
    }

    #[test]
    fn selector_connectivity() {
        let gf = fixtures::triangle_path();
        assert!(SubgraphSelector::from_ids(&gf, &["X2", "X3"]).is_ok());
        assert_eq!(SubgraphSelector::from_ids(&gf, &["X1", "X3"]), Err(Error::DisconnectedSelector));
        assert!(matches!(SubgraphSelector::from_ids(&gf, &["nope"]), Err(Error::InvalidSelector(_))));
    }
}
