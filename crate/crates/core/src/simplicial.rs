//! Finite abstract simplicial complexes over a named vertex universe.
//!
//! Faces are bitmasks over the universe, so a complex can hold at most 64
//! vertices. Subcomplexes share the universe of their parent, which keeps
//! face identities (and therefore boundary signs) stable across `Δ_m`,
//! links and stars.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A face, stored as the set of its vertex indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u64);

impl Face {
    pub const EMPTY: Face = Face(0);

    pub fn from_bits(bits: u64) -> Self {
        Face(bits)
    }

    pub fn singleton(v: usize) -> Self {
        assert!(v < MAX_VERTICES);
        Face(1 << v)
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = usize>) -> Self {
        vertices
            .into_iter()
            .fold(Face::EMPTY, |f, v| f.union(Face::singleton(v)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Dimension, with the empty face at `-1`.
    pub fn dim(self) -> isize {
        self.len() as isize - 1
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1 << v) != 0
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn minus(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    /// Vertex indices in increasing order.
    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    /// Position of `v` in the sorted vertex list, counting from zero.
    pub fn position(self, v: usize) -> Option<usize> {
        self.contains(v)
            .then(|| (self.0 & ((1u64 << v) - 1)).count_ones() as usize)
    }

    /// Codimension-one faces with their boundary signs `(-1)^j`, where `j`
    /// is the position of the removed vertex. The empty face has no boundary.
    pub fn boundary(self) -> impl Iterator<Item = (i64, usize, Face)> {
        self.vertices().enumerate().map(move |(j, v)| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            (sign, v, Face(self.0 & !(1 << v)))
        })
    }

    /// All subsets of this face, including the empty face and itself.
    pub fn subfaces(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let current = sub;
            if sub == full {
                done = true;
            } else {
                sub = (sub.wrapping_sub(full)) & full;
            }
            Some(Face(current))
        })
    }
}

/// Lexicographic order on sorted vertex lists.
impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        let above = !(low | (low - 1));
        let self_holds = self.0 & low != 0;
        // The face missing the lowest differing vertex sorts first exactly
        // when it stops there (it is a prefix of the other).
        let rest = if self_holds { other.0 } else { self.0 };
        let rest_continues = rest & above != 0;
        if self_holds == rest_continues {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices()).finish()
    }
}

impl serde::Serialize for Face {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.vertices())
    }
}

pub(crate) fn dim_lex(a: &Face, b: &Face) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Witness that a complex is the bipyramid `join({u, w}, 2^base)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipyramidWitness {
    pub apexes: (usize, usize),
    pub base: Face,
}

impl BipyramidWitness {
    /// The `k` in `◇^k`.
    pub fn base_dim(&self) -> isize {
        self.base.dim()
    }
}

struct Inner {
    universe: Arc<[String]>,
    facets: Vec<Face>,
    faces: Vec<Face>,
    // faces[dim_start[d + 1]..dim_start[d + 2]] have dimension d.
    dim_start: Vec<usize>,
    index: HashMap<Face, usize>,
    vertex_mask: u64,
}

/// An abstract simplicial complex. Cheap to clone.
#[derive(Clone)]
pub struct SimplicialComplex {
    inner: Arc<Inner>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.inner.universe == other.inner.universe
                && self.inner.faces == other.inner.faces)
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self.facets().iter().map(|&s| self.render_face(s)).collect();
        f.debug_struct("SimplicialComplex")
            .field("facets", &facets)
            .finish()
    }
}

impl SimplicialComplex {
    /// Builds a complex from facet lists given by vertex names. Vertices not
    /// appearing in any facet are kept in the universe but are not part of
    /// the complex.
    pub fn new<S: AsRef<str>>(vertices: &[S], facets: &[Vec<S>]) -> Result<Self> {
        let universe = make_universe(vertices.iter().map(|s| s.as_ref().to_string()).collect())?;
        let lookup: HashMap<&str, usize> = universe
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut faces = Vec::with_capacity(facets.len());
        for facet in facets {
            let mut face = Face::EMPTY;
            for name in facet {
                let v = *lookup
                    .get(name.as_ref())
                    .ok_or_else(|| Error::parse(name.as_ref(), "facet names an unknown vertex"))?;
                if face.contains(v) {
                    return Err(Error::invalid(format!(
                        "vertex `{}` repeated in a facet",
                        name.as_ref()
                    )));
                }
                face = face.union(Face::singleton(v));
            }
            faces.push(face);
        }
        Ok(Self::from_facets(universe, faces))
    }

    /// Builds the closure of the given faces. An empty iterator yields the
    /// void complex; `[Face::EMPTY]` yields `{∅}`.
    pub fn from_facets(universe: Arc<[String]>, generators: impl IntoIterator<Item = Face>) -> Self {
        let facets = maximal_faces(generators);
        let mut all: HashSet<Face> = HashSet::new();
        for &f in &facets {
            all.extend(f.subfaces());
        }
        Self::assemble(universe, facets, all.into_iter().collect())
    }

    /// Builds a complex from a face set already closed under subsets.
    pub(crate) fn from_closed_faces(universe: Arc<[String]>, faces: Vec<Face>) -> Self {
        let facets = maximal_faces(faces.iter().copied());
        Self::assemble(universe, facets, faces)
    }

    fn assemble(universe: Arc<[String]>, mut facets: Vec<Face>, mut faces: Vec<Face>) -> Self {
        assert!(universe.len() <= MAX_VERTICES);
        facets.sort_by(dim_lex);
        faces.sort_by(dim_lex);
        faces.dedup();
        let top = faces.last().map_or(0, |f| f.len());
        let mut dim_start = vec![0; top + 2];
        for (size, slot) in dim_start.iter_mut().enumerate() {
            *slot = faces.partition_point(|f| f.len() < size);
        }
        dim_start.push(faces.len());
        let index = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let vertex_mask = facets.iter().fold(0, |acc, f| acc | f.bits());
        SimplicialComplex {
            inner: Arc::new(Inner {
                universe,
                facets,
                faces,
                dim_start,
                index,
                vertex_mask,
            }),
        }
    }

    pub fn void(universe: Arc<[String]>) -> Self {
        Self::from_facets(universe, std::iter::empty())
    }

    /// The complex `{∅}`.
    pub fn irrelevant(universe: Arc<[String]>) -> Self {
        Self::from_facets(universe, [Face::EMPTY])
    }

    /// The full simplex on the given vertex names.
    pub fn simplex<S: AsRef<str>>(vertices: &[S]) -> Result<Self> {
        let facet: Vec<&str> = vertices.iter().map(|s| s.as_ref()).collect();
        Self::new(&facet, std::slice::from_ref(&facet))
    }

    pub fn universe(&self) -> &Arc<[String]> {
        &self.inner.universe
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.inner.universe[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.inner.universe.iter().position(|n| n == name)
    }

    /// Looks up a face by vertex names. The face need not lie in the complex.
    pub fn face_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Face> {
        names.iter().try_fold(Face::EMPTY, |acc, name| {
            let v = self
                .vertex_index(name.as_ref())
                .ok_or_else(|| Error::parse(name.as_ref(), "unknown vertex"))?;
            Ok(acc.union(Face::singleton(v)))
        })
    }

    pub fn face_names(&self, face: Face) -> Vec<&str> {
        face.vertices().map(|v| self.vertex_name(v)).collect()
    }

    pub fn render_face(&self, face: Face) -> String {
        format!("{{{}}}", self.face_names(face).join(","))
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn is_void(&self) -> bool {
        self.inner.faces.is_empty()
    }

    /// Dimension of the complex; `-1` for both `{∅}` and the void complex.
    pub fn dim(&self) -> isize {
        self.inner.faces.last().map_or(-1, |f| f.dim())
    }

    pub fn facets(&self) -> &[Face] {
        &self.inner.facets
    }

    /// All faces, ordered by dimension and then lexicographically.
    pub fn all_faces(&self) -> &[Face] {
        &self.inner.faces
    }

    pub fn faces(&self, dim: isize) -> &[Face] {
        let size = dim + 1;
        if size < 0 || size as usize + 1 >= self.inner.dim_start.len() {
            return &[];
        }
        let size = size as usize;
        &self.inner.faces[self.inner.dim_start[size]..self.inner.dim_start[size + 1]]
    }

    pub fn num_faces(&self) -> usize {
        self.inner.faces.len()
    }

    pub fn face_index(&self, face: Face) -> Option<usize> {
        self.inner.index.get(&face).copied()
    }

    /// Position of `face` within `faces(face.dim())`.
    pub fn index_in_dim(&self, face: Face) -> Option<usize> {
        let i = self.face_index(face)?;
        Some(i - self.inner.dim_start[face.len()])
    }

    pub fn contains(&self, face: Face) -> bool {
        self.inner.index.contains_key(&face)
    }

    pub fn vertex_mask(&self) -> u64 {
        self.inner.vertex_mask
    }

    pub fn vertices(&self) -> Vec<usize> {
        Face(self.inner.vertex_mask).vertices().collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.inner.vertex_mask.count_ones() as usize
    }

    /// Reduced Euler characteristic `Σ (-1)^dim` over all faces including `∅`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.inner
            .faces
            .iter()
            .map(|f| if f.len() % 2 == 0 { -1 } else { 1 })
            .sum()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.inner.universe == other.inner.universe
            && self.inner.faces.iter().all(|&f| other.contains(f))
    }

    /// The subcomplex of faces inside the given vertex mask.
    pub fn induced(&self, mask: u64) -> SimplicialComplex {
        let target = Face(mask);
        Self::from_facets(
            self.inner.universe.clone(),
            self.inner.facets.iter().map(|&f| f.intersection(target)),
        )
    }

    /// Faces satisfying `keep`, which must describe a subcomplex.
    pub fn filter(&self, mut keep: impl FnMut(Face) -> bool) -> SimplicialComplex {
        let faces: Vec<Face> = self.inner.faces.iter().copied().filter(|&f| keep(f)).collect();
        Self::from_closed_faces(self.inner.universe.clone(), faces)
    }

    fn require_face(&self, tau: Face) -> Result<()> {
        if !self.contains(tau) {
            return Err(Error::invalid(format!(
                "{} is not a face of the complex",
                self.render_face(tau)
            )));
        }
        Ok(())
    }

    pub fn link(&self, tau: Face) -> Result<SimplicialComplex> {
        self.require_face(tau)?;
        Ok(Self::from_facets(
            self.inner.universe.clone(),
            self.inner
                .facets
                .iter()
                .filter(|f| tau.is_subset_of(**f))
                .map(|&f| f.minus(tau)),
        ))
    }

    pub fn star(&self, tau: Face) -> Result<SimplicialComplex> {
        self.require_face(tau)?;
        Ok(Self::from_facets(
            self.inner.universe.clone(),
            self.inner
                .facets
                .iter()
                .copied()
                .filter(|f| tau.is_subset_of(*f)),
        ))
    }

    /// The join `A ⋆ B`. Complexes over the same universe must use disjoint
    /// vertex sets; complexes over different universes are placed on the
    /// concatenated universe, whose names must then be distinct.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex> {
        if self.inner.universe == other.inner.universe {
            if self.vertex_mask() & other.vertex_mask() != 0 {
                return Err(Error::invalid("join requires disjoint vertex sets"));
            }
            let facets = self
                .facets()
                .iter()
                .flat_map(|&a| other.facets().iter().map(move |&b| a.union(b)))
                .collect::<Vec<_>>();
            return Ok(Self::from_facets(self.inner.universe.clone(), facets));
        }
        let names: Vec<String> = self
            .inner
            .universe
            .iter()
            .chain(other.inner.universe.iter())
            .cloned()
            .collect();
        if names.len() > MAX_VERTICES {
            return Err(Error::invalid("join exceeds the vertex limit"));
        }
        let universe = make_universe(names)
            .map_err(|_| Error::invalid("join requires disjoint vertex sets"))?;
        let shift = self.inner.universe.len();
        let facets = self
            .facets()
            .iter()
            .flat_map(|&a| {
                other
                    .facets()
                    .iter()
                    .map(move |&b| a.union(Face(b.bits() << shift)))
            })
            .collect::<Vec<_>>();
        Ok(Self::from_facets(universe, facets))
    }

    /// Stellar subdivision at a new vertex named `new_vertex` inside `omega`.
    /// The new vertex is appended to the universe, so it comes last in the
    /// vertex order. Returns the subdivided complex and the new index.
    pub fn stellar_subdivide(
        &self,
        omega: Face,
        new_vertex: &str,
    ) -> Result<(SimplicialComplex, usize)> {
        self.require_face(omega)?;
        if omega.is_empty() {
            return Err(Error::invalid("cannot subdivide the empty face"));
        }
        if !crate::monomial::is_identifier(new_vertex) {
            return Err(Error::parse(new_vertex, "vertex names must be identifiers"));
        }
        if self.vertex_index(new_vertex).is_some() {
            return Err(Error::invalid(format!(
                "vertex `{new_vertex}` already exists"
            )));
        }
        let mut names: Vec<String> = self.inner.universe.to_vec();
        if names.len() >= MAX_VERTICES {
            return Err(Error::invalid("subdivision exceeds the vertex limit"));
        }
        let vp = names.len();
        names.push(new_vertex.to_string());
        let universe: Arc<[String]> = names.into();
        let cone = Face::singleton(vp);
        let mut facets: Vec<Face> = Vec::new();
        for &f in &self.inner.facets {
            if omega.is_subset_of(f) {
                // Each facet through ω is replaced by the cones over its
                // faces missing one vertex of ω.
                for v in omega.vertices() {
                    facets.push(f.minus(Face::singleton(v)).union(cone));
                }
            } else {
                facets.push(f);
            }
        }
        Ok((Self::from_facets(universe, facets), vp))
    }

    /// Recognizes `join({u, w}, 2^σ)` with `σ` non-empty.
    pub fn is_bipyramid(&self) -> Option<BipyramidWitness> {
        let [a, b] = self.facets() else {
            return None;
        };
        let base = a.intersection(*b);
        if base.is_empty() || a.len() != base.len() + 1 || b.len() != base.len() + 1 {
            return None;
        }
        let u = a.minus(base).vertices().next()?;
        let w = b.minus(base).vertices().next()?;
        Some(BipyramidWitness {
            apexes: (u.min(w), u.max(w)),
            base,
        })
    }
}

fn make_universe(names: Vec<String>) -> Result<Arc<[String]>> {
    if names.len() > MAX_VERTICES {
        return Err(Error::invalid(format!(
            "at most {MAX_VERTICES} vertices are supported"
        )));
    }
    let mut seen = HashSet::new();
    for name in &names {
        if !crate::monomial::is_identifier(name) {
            return Err(Error::parse(name.clone(), "vertex names must be identifiers"));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::invalid(format!("duplicate vertex `{name}`")));
        }
    }
    Ok(names.into())
}

/// Builds a universe from vertex names, validating uniqueness.
pub fn universe<S: AsRef<str>>(names: &[S]) -> Result<Arc<[String]>> {
    make_universe(names.iter().map(|s| s.as_ref().to_string()).collect())
}

fn maximal_faces(faces: impl IntoIterator<Item = Face>) -> Vec<Face> {
    let mut faces: Vec<Face> = faces.into_iter().collect();
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut out: Vec<Face> = Vec::new();
    for f in faces {
        if !out.iter().any(|g| f.is_subset_of(*g)) {
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bipyramid_example() -> SimplicialComplex {
        SimplicialComplex::new(
            &["v0", "w0", "w1", "v1"],
            &[vec!["v0", "w0", "v1"], vec!["v0", "w1", "v1"]],
        )
        .unwrap()
    }

    fn four_around_an_edge() -> SimplicialComplex {
        let names = ["u0", "u1", "u2", "u3", "u4", "u5"];
        SimplicialComplex::new(
            &names,
            &[
                vec!["u0", "u5", "u1", "u2"],
                vec!["u0", "u5", "u2", "u4"],
                vec!["u0", "u5", "u4", "u3"],
                vec!["u0", "u5", "u3", "u1"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn face_order_is_lexicographic() {
        let f = |v: &[usize]| Face::from_vertices(v.iter().copied());
        let mut faces = vec![f(&[1, 2]), f(&[0, 2]), f(&[0, 1]), f(&[0]), f(&[0, 1, 2]), f(&[2])];
        faces.sort();
        assert_eq!(
            faces,
            vec![f(&[0]), f(&[0, 1]), f(&[0, 1, 2]), f(&[0, 2]), f(&[1, 2]), f(&[2])]
        );
        assert!(Face::EMPTY < f(&[0]));
        assert_eq!(f(&[0, 3]).position(3), Some(1));
    }

    #[test]
    fn bipyramid_edges() {
        let k = bipyramid_example();
        let edges = k.faces(1);
        assert_eq!(edges.len(), 5);
        let w = k.face_from_names(&["w0", "w1"]).unwrap();
        assert!(!edges.contains(&w));
        assert_eq!(k.faces(-1), &[Face::EMPTY]);
        assert_eq!(k.faces(0).len(), 4);
        let void = SimplicialComplex::void(k.universe().clone());
        assert!(void.faces(0).is_empty());
        assert!(void.faces(-1).is_empty());
        let irr = SimplicialComplex::irrelevant(k.universe().clone());
        assert_eq!(irr.faces(-1), &[Face::EMPTY]);
        assert_ne!(void, irr);
    }

    #[test]
    fn links_and_stars() {
        let k = bipyramid_example();
        let base = k.face_from_names(&["v0", "v1"]).unwrap();
        let link = k.link(base).unwrap();
        let pts = [k.face_from_names(&["w0"]).unwrap(), k.face_from_names(&["w1"]).unwrap()];
        assert_eq!(link.facets(), &pts);
        assert_eq!(k.link(Face::EMPTY).unwrap(), k);
        assert_eq!(k.star(Face::EMPTY).unwrap(), k);
        let star = k.star(pts[0]).unwrap();
        assert_eq!(star.facets(), &[k.face_from_names(&["v0", "w0", "v1"]).unwrap()]);
        assert!(k.link(k.face_from_names(&["w0", "w1"]).unwrap()).is_err());
    }

    #[test]
    fn link_in_the_six_vertex_example() {
        let k = four_around_an_edge();
        let omega = k.face_from_names(&["u0", "u4"]).unwrap();
        let link = k.link(omega).unwrap();
        // Oracle: direct enumeration from the definition.
        let expected: Vec<Face> = k
            .all_faces()
            .iter()
            .copied()
            .filter(|s| s.is_disjoint(omega) && k.contains(s.union(omega)))
            .collect();
        let mut got = link.all_faces().to_vec();
        got.sort_by(dim_lex);
        assert_eq!(got, expected);
        let names: Vec<Vec<&str>> = link.facets().iter().map(|&f| link.face_names(f)).collect();
        assert_eq!(names, vec![vec!["u2", "u5"], vec!["u3", "u5"]]);
    }

    #[test]
    fn joins() {
        let pts = SimplicialComplex::new(&["a", "b"], &[vec!["a"], vec!["b"]]).unwrap();
        let edge = SimplicialComplex::simplex(&["p", "q"]).unwrap();
        let bip = pts.join(&edge).unwrap();
        let w = bip.is_bipyramid().unwrap();
        assert_eq!(w.base_dim(), 1);
        assert_eq!(bip.facets().len(), 2);
        let irr = SimplicialComplex::irrelevant(universe::<&str>(&[]).unwrap());
        let same = edge.join(&irr).unwrap();
        assert_eq!(same.all_faces(), edge.all_faces());
        let point = SimplicialComplex::simplex(&["c"]).unwrap();
        let cone = point.join(&pts).unwrap();
        assert_eq!(cone.facets().len(), 2);
        assert_eq!(cone.num_vertices(), 3);
        assert!(edge.join(&edge).is_err());
    }

    #[test]
    fn subdivision_of_the_bipyramid() {
        let k = bipyramid_example();
        let omega = k.face_from_names(&["v0", "v1"]).unwrap();
        let (sub, vp) = k.stellar_subdivide(omega, "vp").unwrap();
        assert_eq!(vp, 4);
        let expected: Vec<Face> = [
            ["v0", "w0", "vp"],
            ["v0", "w1", "vp"],
            ["w0", "v1", "vp"],
            ["w1", "v1", "vp"],
        ]
        .iter()
        .map(|n| sub.face_from_names(n).unwrap())
        .collect::<Vec<_>>();
        let mut facets = sub.facets().to_vec();
        facets.sort();
        let mut expected = expected;
        expected.sort();
        assert_eq!(facets, expected);
        assert!(!sub.contains(omega));
        assert_eq!(sub.num_vertices(), 5);
        assert_eq!(sub.faces(1).len(), 8);
        assert_eq!(sub.reduced_euler_characteristic(), k.reduced_euler_characteristic());
        assert!(k.stellar_subdivide(omega, "v0").is_err());
        assert!(k
            .stellar_subdivide(k.face_from_names(&["w0", "w1"]).unwrap(), "z")
            .is_err());
    }

    #[test]
    fn subdividing_an_edge_gives_a_path() {
        let k = SimplicialComplex::simplex(&["a", "b"]).unwrap();
        let ab = k.face_from_names(&["a", "b"]).unwrap();
        let (sub, _) = k.stellar_subdivide(ab, "m").unwrap();
        let names: Vec<Vec<&str>> = sub.facets().iter().map(|&f| sub.face_names(f)).collect();
        assert_eq!(names, vec![vec!["a", "m"], vec!["b", "m"]]);
    }

    #[test]
    fn bipyramid_recognition() {
        let k = bipyramid_example();
        let w = k.is_bipyramid().unwrap();
        assert_eq!(w.apexes, (1, 2));
        assert_eq!(w.base, k.face_from_names(&["v0", "v1"]).unwrap());
        assert!(four_around_an_edge().is_bipyramid().is_none());
        assert_eq!(four_around_an_edge().facets().len(), 4);
    }

    fn bipyramid(k: usize) -> SimplicialComplex {
        let mut names: Vec<String> = (0..=k).map(|i| format!("v{i}")).collect();
        names.push("w0".into());
        names.push("w1".into());
        let base: Vec<String> = names[..=k].to_vec();
        let mut f0 = base.clone();
        f0.push("w0".into());
        let mut f1 = base;
        f1.push("w1".into());
        SimplicialComplex::new(&names, &[f0, f1]).unwrap()
    }

    #[test]
    fn removing_a_base_vertex_keeps_a_bipyramid() {
        for n in 2..=5 {
            let k = bipyramid(n - 1);
            let w = k.is_bipyramid().unwrap();
            assert_eq!(w.base.len(), n);
            for v in w.base.vertices() {
                let smaller = k.induced(k.vertex_mask() & !(1 << v));
                let w2 = smaller.is_bipyramid().unwrap();
                assert_eq!(w2.apexes, w.apexes);
                assert_eq!(w2.base.len(), n - 1);
            }
        }
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        proptest::collection::vec(1u64..64, 1..6).prop_map(|facets| {
            let u = universe(&["a", "b", "c", "d", "e", "f"]).unwrap();
            SimplicialComplex::from_facets(u, facets.into_iter().map(Face::from_bits))
        })
    }

    proptest! {
        #[test]
        fn link_is_maximal_with_join_inside(k in arb_complex(), pick in 0usize..64) {
            let tau = k.all_faces()[pick % k.num_faces()];
            let link = k.link(tau).unwrap();
            for &s in link.all_faces() {
                prop_assert!(s.is_disjoint(tau));
                for t in tau.subfaces() {
                    prop_assert!(k.contains(s.union(t)));
                }
            }
            for &s in k.all_faces() {
                if s.is_disjoint(tau) && k.contains(s.union(tau)) {
                    prop_assert!(link.contains(s));
                }
            }
            let star = k.star(tau).unwrap();
            prop_assert!(star.is_subcomplex_of(&k));
        }

        #[test]
        fn stellar_subdivision_formula(k in arb_complex(), pick in 0usize..64) {
            let nonempty: Vec<Face> = k.all_faces().iter().copied().filter(|f| !f.is_empty()).collect();
            let omega = nonempty[pick % nonempty.len()];
            let (sub, vp) = k.stellar_subdivide(omega, "new").unwrap();
            let cone = Face::singleton(vp);
            let mut expected: Vec<Face> = k.all_faces().iter().copied()
                .filter(|s| !omega.is_subset_of(*s))
                .collect();
            for &s in k.all_faces() {
                if !omega.is_subset_of(s) && k.contains(s.union(omega)) {
                    expected.push(s.union(cone));
                }
            }
            expected.sort_by(dim_lex);
            prop_assert_eq!(sub.all_faces(), &expected[..]);
            prop_assert_eq!(sub.reduced_euler_characteristic(), k.reduced_euler_characteristic());
            // At a vertex the formula replaces that vertex by the new one.
            let growth = if omega.len() == 1 { 0 } else { 1 };
            prop_assert_eq!(sub.num_vertices(), k.num_vertices() + growth);
        }
    }
}
