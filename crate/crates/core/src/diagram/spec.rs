use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::angleform::Shape;
use crate::error::{Error, Result};
use crate::holonomy::{Ring, RingEntry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub id: String,
    pub angles: Shape,
}

/// `[triangle id, edge index, triangle id, edge index]`. Edge `k` is the edge
/// opposite vertex `k`, running from vertex `k+1` to vertex `k+2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing(pub String, pub usize, pub String, pub usize);

/// Counter-clockwise `(triangle id, pivot index)` pairs around an interior vertex.
pub type VertexRing = Vec<(String, usize)>;

/// A planar map of shaped triangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub n: u32,
    pub triangles: Vec<Triangle>,
    pub gluings: Vec<Gluing>,
    pub interior_vertices: Vec<VertexRing>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

/// A triangle whose corners carry vertex names; shared names induce gluings.
#[derive(Clone, Debug)]
pub struct LabeledTriangle {
    pub id: String,
    pub vertices: [String; 3],
    pub angles: Shape,
}

impl LabeledTriangle {
    pub fn new(id: impl Into<String>, vertices: [&str; 3], angles: Shape) -> Self {
        LabeledTriangle {
            id: id.into(),
            vertices: vertices.map(str::to_string),
            angles,
        }
    }
}

/// Pivot of the next triangle around a vertex, reached across edge `edge`.
fn pivot_after(edge: usize) -> usize {
    (edge + 1) % 3
}

impl DiagramSpec {
    /// Builds a spec from vertex-labeled triangles: edges with matching
    /// endpoints (traversed in opposite directions) are glued, and every vertex
    /// whose incident triangles close up is recorded as an interior ring.
    pub fn from_labeled(
        n: u32,
        triangles: Vec<LabeledTriangle>,
        mut metadata: Map<String, Value>,
    ) -> Result<Self> {
        let mut directed: HashMap<(&str, &str), (usize, usize)> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let from = tri.vertices[(k + 1) % 3].as_str();
                let to = tri.vertices[(k + 2) % 3].as_str();
                if from == to {
                    return Err(Error::InvalidSpec(format!("triangle {} repeats {from}", tri.id)));
                }
                if directed.insert((from, to), (t, k)).is_some() {
                    return Err(Error::InvalidSpec(format!(
                        "edge {from}->{to} is used twice in the same direction"
                    )));
                }
            }
        }
        let mut gluings = Vec::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let from = tri.vertices[(k + 1) % 3].as_str();
                let to = tri.vertices[(k + 2) % 3].as_str();
                if let Some(&(u, e)) = directed.get(&(to, from)) {
                    if (t, k) < (u, e) {
                        gluings.push(Gluing(tri.id.clone(), k, triangles[u].id.clone(), e));
                    }
                }
            }
        }

        let mut labels = Map::new();
        for tri in &triangles {
            labels.insert(
                tri.id.clone(),
                Value::Array(tri.vertices.iter().cloned().map(Value::String).collect()),
            );
        }
        metadata.insert("labels".into(), Value::Object(labels));

        let mut spec = DiagramSpec {
            n,
            triangles: triangles
                .iter()
                .map(|t| Triangle {
                    id: t.id.clone(),
                    angles: t.angles.clone(),
                })
                .collect(),
            gluings,
            interior_vertices: Vec::new(),
            metadata,
        };

        // Interior vertices, in order of first appearance.
        let mut seen: Vec<&str> = Vec::new();
        for tri in &triangles {
            for v in &tri.vertices {
                if !seen.contains(&v.as_str()) {
                    seen.push(v);
                }
            }
        }
        let index = spec.gluing_index();
        for vertex in seen {
            let (t, pivot) = triangles
                .iter()
                .enumerate()
                .find_map(|(t, tri)| tri.vertices.iter().position(|v| v == vertex).map(|p| (t, p)))
                .expect("vertex comes from a triangle");
            if let Some(ring) = spec.trace_ring(&index, t, pivot) {
                spec.interior_vertices.push(ring);
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Follows the gluings around the vertex at `(triangle, pivot)`; `None` if
    /// the walk reaches a boundary edge.
    fn trace_ring(
        &self,
        index: &HashMap<(usize, usize), (usize, usize)>,
        triangle: usize,
        pivot: usize,
    ) -> Option<VertexRing> {
        let mut ring = Vec::new();
        let (mut t, mut p) = (triangle, pivot);
        loop {
            ring.push((self.triangles[t].id.clone(), p));
            let out_edge = (p + 1) % 3;
            let &(u, e) = index.get(&(t, out_edge))?;
            t = u;
            p = pivot_after(e);
            if (t, p) == (triangle, pivot) {
                return Some(ring);
            }
            if ring.len() > 3 * self.triangles.len() {
                return None;
            }
        }
    }

    pub fn triangle_index(&self) -> HashMap<&str, usize> {
        self.triangles
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id.as_str(), i))
            .collect()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.triangles.iter().position(|t| t.id == id)
    }

    pub fn triangle(&self, id: &str) -> Option<&Triangle> {
        self.triangles.iter().find(|t| t.id == id)
    }

    /// `(triangle, edge) -> (triangle, edge)` in both directions.
    pub fn gluing_index(&self) -> HashMap<(usize, usize), (usize, usize)> {
        let ids = self.triangle_index();
        let mut out = HashMap::new();
        for g in &self.gluings {
            if let (Some(&t), Some(&u)) = (ids.get(g.0.as_str()), ids.get(g.2.as_str())) {
                out.insert((t, g.1), (u, g.3));
                out.insert((u, g.3), (t, g.1));
            }
        }
        out
    }

    pub fn ring(&self, vertex: &VertexRing) -> Result<Ring> {
        let entries = vertex
            .iter()
            .map(|(id, pivot)| {
                let tri = self
                    .triangle(id)
                    .ok_or_else(|| Error::InvalidSpec(format!("ring references unknown {id}")))?;
                Ok(RingEntry::new(tri.angles.clone(), *pivot))
            })
            .collect::<Result<Vec<_>>>()?;
        Ring::new(entries)
    }

    /// Vertex names from the `labels` metadata, when present.
    pub fn labels(&self) -> Option<BTreeMap<String, [String; 3]>> {
        let labels = self.metadata.get("labels")?.as_object()?;
        let mut out = BTreeMap::new();
        for (id, value) in labels {
            let arr = value.as_array()?;
            if arr.len() != 3 {
                return None;
            }
            let names = [0, 1, 2].map(|i| arr[i].as_str().unwrap_or_default().to_string());
            out.insert(id.clone(), names);
        }
        Some(out)
    }

    /// The triangles with their vertex names, in spec order.
    pub fn labeled(&self) -> Result<Vec<LabeledTriangle>> {
        let labels = self
            .labels()
            .ok_or_else(|| Error::InvalidSpec("spec carries no vertex labels".into()))?;
        self.triangles
            .iter()
            .map(|t| {
                let vertices = labels
                    .get(&t.id)
                    .cloned()
                    .ok_or_else(|| Error::InvalidSpec(format!("no labels for triangle {}", t.id)))?;
                Ok(LabeledTriangle {
                    id: t.id.clone(),
                    vertices,
                    angles: t.angles.clone(),
                })
            })
            .collect()
    }

    /// Triangle id groups declared as separately developed disks.
    pub fn disks(&self) -> Option<Vec<Vec<String>>> {
        let disks = self.metadata.get("disks")?.as_array()?;
        disks
            .iter()
            .map(|d| {
                d.as_array().map(|ids| {
                    ids.iter()
                        .filter_map(|v| v.as_str().map(str::to_string))
                        .collect()
                })
            })
            .collect()
    }

    /// Connected components of the gluing graph, as triangle indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let index = self.gluing_index();
        let mut component = vec![usize::MAX; self.triangles.len()];
        let mut out = Vec::new();
        for start in 0..self.triangles.len() {
            if component[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            component[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for e in 0..3 {
                    if let Some(&(u, _)) = index.get(&(t, e)) {
                        if component[u] == usize::MAX {
                            component[u] = id;
                            members.push(u);
                            queue.push_back(u);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Structural checks: unique ids, edge indices, single use of each edge,
    /// ring/gluing consistency, connectivity (unless disks are declared).
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        if self.triangles.is_empty() {
            return Err(Error::InvalidSpec("no triangles".into()));
        }
        let ids = self.triangle_index();
        if ids.len() != self.triangles.len() {
            return Err(Error::InvalidSpec("duplicate triangle ids".into()));
        }
        let mut used = HashMap::new();
        for g in &self.gluings {
            for (id, edge) in [(&g.0, g.1), (&g.2, g.3)] {
                let t = *ids
                    .get(id.as_str())
                    .ok_or_else(|| Error::InvalidSpec(format!("gluing references unknown {id}")))?;
                if edge > 2 {
                    return Err(Error::InvalidSpec(format!("edge index {edge} on {id}")));
                }
                if used.insert((t, edge), ()).is_some() {
                    return Err(Error::InvalidSpec(format!("edge {edge} of {id} glued twice")));
                }
            }
        }
        let index = self.gluing_index();
        for ring in &self.interior_vertices {
            if ring.is_empty() {
                return Err(Error::InvalidSpec("empty interior ring".into()));
            }
            for i in 0..ring.len() {
                let (id, pivot) = &ring[i];
                let (next_id, next_pivot) = &ring[(i + 1) % ring.len()];
                let t = *ids
                    .get(id.as_str())
                    .ok_or_else(|| Error::InvalidSpec(format!("ring references unknown {id}")))?;
                let u = *ids.get(next_id.as_str()).ok_or_else(|| {
                    Error::InvalidSpec(format!("ring references unknown {next_id}"))
                })?;
                if *pivot > 2 || *next_pivot > 2 {
                    return Err(Error::InvalidSpec("pivot index out of range".into()));
                }
                let out_edge = (pivot + 1) % 3;
                let in_edge = (next_pivot + 2) % 3;
                if index.get(&(t, out_edge)) != Some(&(u, in_edge)) {
                    return Err(Error::InvalidSpec(format!(
                        "ring entries {id}/{pivot} and {next_id}/{next_pivot} do not share a glued edge"
                    )));
                }
            }
        }
        let components = self.components();
        if components.len() > 1 {
            let declared = self.disks().map(|d| d.len()).unwrap_or(1);
            if declared != components.len() {
                let unreached = self.triangles.len() - components[0].len();
                return Err(Error::DisconnectedSpec { unreached });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram specs serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DiagramSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").and_then(Value::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angleform::AngleForm as F;

    fn bisector() -> DiagramSpec {
        let n = 2;
        DiagramSpec::from_labeled(
            n,
            vec![
                LabeledTriangle::new("ABI", ["A", "B", "I"], Shape::new(F::a(), F::b(), F::c().prime(n))),
                LabeledTriangle::new("BCI", ["B", "C", "I"], Shape::new(F::b(), F::c(), F::a().prime(n))),
                LabeledTriangle::new("CAI", ["C", "A", "I"], Shape::new(F::c(), F::a(), F::b().prime(n))),
            ],
            Map::new(),
        )
        .unwrap()
    }

    #[test]
    fn labeled_bisector_structure() {
        let spec = bisector();
        assert_eq!(spec.triangles.len(), 3);
        assert_eq!(spec.gluings.len(), 3);
        assert_eq!(spec.interior_vertices.len(), 1);
        assert_eq!(
            spec.interior_vertices[0],
            vec![("ABI".to_string(), 2), ("BCI".to_string(), 2), ("CAI".to_string(), 2)]
        );
        assert!(spec.gluings.contains(&Gluing("ABI".into(), 0, "BCI".into(), 1)));
    }

    #[test]
    fn json_round_trip() {
        let spec = bisector();
        let text = spec.to_json();
        assert!(text.contains("\"c + 1/4*tau\""));
        let back = DiagramSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn validation_catches_errors() {
        let mut spec = bisector();
        spec.gluings.push(Gluing("ABI".into(), 0, "CAI".into(), 2));
        assert!(spec.validate().is_err());

        let mut spec = bisector();
        spec.interior_vertices[0].swap(0, 1);
        assert!(spec.validate().is_err());

        let mut spec = bisector();
        spec.gluings.clear();
        spec.interior_vertices.clear();
        assert!(matches!(spec.validate(), Err(Error::DisconnectedSpec { unreached: 2 })));

        let reversed = DiagramSpec::from_labeled(
            2,
            vec![
                LabeledTriangle::new("T", ["A", "B", "C"], Shape::new(F::a(), F::b(), F::c())),
                LabeledTriangle::new("U", ["A", "B", "D"], Shape::new(F::a(), F::b(), F::c())),
            ],
            Map::new(),
        );
        assert!(reversed.is_err());
    }
}
