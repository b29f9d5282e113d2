//! Labeled simplicial complexes `(Δ, ℓ)` and their subcomplexes `Δ_m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::simplicial::{Face, SimplicialComplex};

/// A simplicial complex with a monomial on every face (including `∅`),
/// weakly increasing along inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledComplex {
    complex: SimplicialComplex,
    nvars: usize,
    // Aligned with `complex.all_faces()`.
    labels: Vec<Monomial>,
    lcm: bool,
}

/// One attainable subcomplex `Δ_m`, with the least `m` (above the floor)
/// realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attainable {
    pub witness: Monomial,
    pub complex: SimplicialComplex,
}

impl LabeledComplex {
    /// The lcm-labeling determined by vertex labels given by name.
    pub fn from_vertex_labels<S: AsRef<str>>(
        complex: SimplicialComplex,
        nvars: usize,
        labels: impl IntoIterator<Item = (S, Monomial)>,
    ) -> Result<Self> {
        let mut by_index: Vec<Option<Monomial>> = vec![None; complex.universe().len()];
        for (name, m) in labels {
            let v = complex
                .vertex_index(name.as_ref())
                .ok_or_else(|| Error::parse(name.as_ref(), "label for an unknown vertex"))?;
            by_index[v] = Some(m);
        }
        Self::from_indexed_labels(complex, nvars, by_index)
    }

    /// The lcm-labeling determined by labels indexed by universe position.
    pub fn from_indexed_labels(
        complex: SimplicialComplex,
        nvars: usize,
        labels: Vec<Option<Monomial>>,
    ) -> Result<Self> {
        if labels.len() != complex.universe().len() {
            return Err(Error::invalid("one label slot per vertex is required"));
        }
        for v in complex.vertices() {
            match &labels[v] {
                None => {
                    return Err(Error::invalid(format!(
                        "vertex `{}` has no label",
                        complex.vertex_name(v)
                    )))
                }
                Some(m) if m.nvars() != nvars => {
                    return Err(Error::Dimension {
                        expected: nvars,
                        found: m.nvars(),
                    })
                }
                Some(_) => {}
            }
        }
        let faces = complex.all_faces();
        let mut face_labels: Vec<Monomial> = Vec::with_capacity(faces.len());
        for &f in faces {
            let label = match f.vertices().next() {
                None => Monomial::one(nvars),
                Some(v) => {
                    let rest = f.minus(Face::singleton(v));
                    let i = complex.face_index(rest).expect("complex is closed");
                    face_labels[i].lcm_unchecked(labels[v].as_ref().expect("checked above"))
                }
            };
            face_labels.push(label);
        }
        Ok(LabeledComplex {
            complex,
            nvars,
            labels: face_labels,
            lcm: true,
        })
    }

    /// A general labeling, given for every face in `complex.all_faces()`
    /// order. Labels must weakly increase along inclusions. The lcm flag is
    /// detected.
    pub fn new(complex: SimplicialComplex, nvars: usize, labels: Vec<Monomial>) -> Result<Self> {
        if labels.len() != complex.num_faces() {
            return Err(Error::invalid(format!(
                "expected {} face labels, found {}",
                complex.num_faces(),
                labels.len()
            )));
        }
        if let Some(m) = labels.iter().find(|m| m.nvars() != nvars) {
            return Err(Error::Dimension {
                expected: nvars,
                found: m.nvars(),
            });
        }
        let faces = complex.all_faces();
        for (i, &f) in faces.iter().enumerate() {
            for (_, _, t) in f.boundary() {
                let j = complex.face_index(t).expect("complex is closed");
                if !labels[j].divides_unchecked(&labels[i]) {
                    return Err(Error::invalid(format!(
                        "label of {} does not divide label of {}",
                        complex.render_face(t),
                        complex.render_face(f)
                    )));
                }
            }
        }
        let lcm = faces.iter().enumerate().all(|(i, &f)| match f.len() {
            0 => labels[i].is_one(),
            1 => true,
            _ => {
                let mut acc = Monomial::one(nvars);
                for v in f.vertices() {
                    let j = complex.face_index(Face::singleton(v)).expect("closed");
                    acc.lcm_in_place(&labels[j]);
                }
                acc == labels[i]
            }
        });
        Ok(LabeledComplex {
            complex,
            nvars,
            labels,
            lcm,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_lcm(&self) -> bool {
        self.lcm
    }

    pub(crate) fn require_lcm(&self, what: &str) -> Result<()> {
        if !self.lcm {
            return Err(Error::invalid(format!("{what} requires an lcm-labeling")));
        }
        Ok(())
    }

    /// Labels aligned with `complex().all_faces()`.
    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn label(&self, face: Face) -> Option<&Monomial> {
        self.complex.face_index(face).map(|i| &self.labels[i])
    }

    pub fn vertex_label(&self, v: usize) -> Option<&Monomial> {
        self.label(Face::singleton(v))
    }

    /// `(vertex index, label)` for every vertex of the complex.
    pub fn vertex_labels(&self) -> Vec<(usize, Monomial)> {
        self.complex
            .vertices()
            .into_iter()
            .map(|v| (v, self.vertex_label(v).expect("vertex is a face").clone()))
            .collect()
    }

    /// Ideal generated by the vertex labels, which `F_Δ` resolves in
    /// homological degree zero.
    pub fn vertex_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_unchecked(
            self.nvars,
            self.vertex_labels().into_iter().map(|(_, m)| m).collect(),
        )
    }

    /// Least common multiple of every label.
    pub fn label_lcm(&self) -> Monomial {
        let mut acc = Monomial::one(self.nvars);
        for m in &self.labels {
            acc.lcm_in_place(m);
        }
        acc
    }

    pub fn max_label_exponent(&self) -> u32 {
        self.labels.iter().map(Monomial::max_exponent).max().unwrap_or(0)
    }

    fn check_nvars(&self, m: &Monomial) -> Result<()> {
        if m.nvars() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: m.nvars(),
            });
        }
        Ok(())
    }

    /// Vertices whose label divides `m`. For an lcm-labeling `Δ_m` is the
    /// subcomplex induced on this set.
    pub fn vertex_mask_at(&self, m: &Monomial) -> u64 {
        self.complex
            .vertices()
            .into_iter()
            .filter(|&v| {
                self.vertex_label(v)
                    .expect("vertex is a face")
                    .divides_unchecked(m)
            })
            .fold(0, |acc, v| acc | (1 << v))
    }

    /// `Δ_m = {σ : ℓ(σ) | m}`.
    pub fn subcomplex_at(&self, m: &Monomial) -> Result<SimplicialComplex> {
        self.check_nvars(m)?;
        Ok(self.subcomplex_at_unchecked(m))
    }

    pub(crate) fn subcomplex_at_unchecked(&self, m: &Monomial) -> SimplicialComplex {
        if self.lcm && !self.complex.is_void() {
            return self.complex.induced(self.vertex_mask_at(m));
        }
        let faces: Vec<Face> = self
            .complex
            .all_faces()
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| l.divides_unchecked(m))
            .map(|(&f, _)| f)
            .collect();
        SimplicialComplex::from_closed_faces(self.complex.universe().clone(), faces)
    }

    /// Least multiple of `floor` whose subcomplex equals `Δ_m`.
    fn canonical(&self, floor: &Monomial, m: &Monomial) -> Monomial {
        let mut out = floor.clone();
        if self.lcm {
            for v in bits(self.vertex_mask_at(m)) {
                out.lcm_in_place(self.vertex_label(v).expect("vertex"));
            }
        } else {
            for l in self.labels.iter().filter(|l| l.divides_unchecked(m)) {
                out.lcm_in_place(l);
            }
        }
        out
    }

    /// Canonical witnesses `m` of every distinct `Δ_m` with `floor | m`,
    /// in increasing monomial order. Each witness is the unique least such
    /// monomial realizing its subcomplex.
    pub fn attainable_witnesses(&self, floor: Option<&Monomial>) -> Result<Vec<Monomial>> {
        let floor = match floor {
            Some(f) => {
                self.check_nvars(f)?;
                f.clone()
            }
            None => Monomial::one(self.nvars),
        };
        let steps: Vec<&Monomial> = if self.lcm {
            let mut seen = BTreeSet::new();
            self.complex
                .vertices()
                .into_iter()
                .map(|v| self.vertex_label(v).expect("vertex"))
                .filter(|m| seen.insert(*m))
                .collect()
        } else {
            let mut seen = BTreeSet::new();
            self.labels.iter().filter(|m| seen.insert(*m)).collect()
        };
        let start = self.canonical(&floor, &floor);
        let mut found: BTreeSet<Monomial> = BTreeSet::new();
        let mut queue = vec![start.clone()];
        found.insert(start);
        while let Some(m) = queue.pop() {
            for step in &steps {
                if step.divides_unchecked(&m) {
                    continue;
                }
                let next = self.canonical(&floor, &m.lcm_unchecked(step));
                if found.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Every distinct `Δ_m` with `floor | m`, paired with its canonical
    /// witness. Any `Δ_m` with `floor | m` appears in this list.
    pub fn attainable_subcomplexes(&self, floor: Option<&Monomial>) -> Result<Vec<Attainable>> {
        Ok(self
            .attainable_witnesses(floor)?
            .into_iter()
            .map(|witness| Attainable {
                complex: self.subcomplex_at_unchecked(&witness),
                witness,
            })
            .collect())
    }

    /// Attainable `Δ_m` of an lcm-labeling, returned as vertex masks.
    pub(crate) fn attainable_masks(&self, floor: &Monomial) -> Vec<(Monomial, u64)> {
        debug_assert!(self.lcm);
        let verts: Vec<(usize, &Monomial)> = self
            .complex
            .vertices()
            .into_iter()
            .map(|v| (v, self.vertex_label(v).expect("vertex")))
            .collect();
        let mask_of = |m: &Monomial| {
            verts
                .iter()
                .filter(|(_, l)| l.divides_unchecked(m))
                .fold(0u64, |acc, (v, _)| acc | (1 << v))
        };
        let witness_of = |mask: u64| {
            let mut out = floor.clone();
            for (v, l) in &verts {
                if mask & (1 << v) != 0 {
                    out.lcm_in_place(l);
                }
            }
            out
        };
        let mut seen: HashMap<u64, ()> = HashMap::new();
        let mut out = Vec::new();
        let first = mask_of(floor);
        seen.insert(first, ());
        let mut queue = vec![first];
        while let Some(mask) = queue.pop() {
            let m = witness_of(mask);
            for (v, l) in &verts {
                if mask & (1 << v) != 0 {
                    continue;
                }
                let next = mask_of(&m.lcm_unchecked(l));
                if seen.insert(next, ()).is_none() {
                    queue.push(next);
                }
            }
            out.push((m, mask));
        }
        out
    }

    /// Zeroes every exponent on `supp(b)`. `b` must be square-free.
    pub fn truncate_labels(&self, b: &Monomial) -> Result<LabeledComplex> {
        self.check_nvars(b)?;
        if !b.is_square_free() {
            return Err(Error::invalid("truncation requires a square-free monomial"));
        }
        Ok(LabeledComplex {
            complex: self.complex.clone(),
            nvars: self.nvars,
            labels: self.labels.iter().map(|l| l.zero_out_unchecked(b)).collect(),
            lcm: self.lcm,
        })
    }

    /// Applies a variable permutation to every label.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<LabeledComplex> {
        Ok(LabeledComplex {
            complex: self.complex.clone(),
            nvars: self.nvars,
            labels: self
                .labels
                .iter()
                .map(|l| l.permute(perm))
                .collect::<Result<_>>()?,
            lcm: self.lcm,
        })
    }

    /// Vertex labels by name, for serialization.
    pub fn vertex_label_map(&self) -> BTreeMap<String, Monomial> {
        self.vertex_labels()
            .into_iter()
            .map(|(v, m)| (self.complex.vertex_name(v).to_string(), m))
            .collect()
    }
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    Face::from_bits(mask).vertices()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::ToricContext;
    use proptest::prelude::*;

    fn bipyramid_example() -> (ToricContext, LabeledComplex) {
        let ctx = ToricContext::product_of_projective(2, 1);
        let k = SimplicialComplex::new(
            &["v0", "w0", "w1", "v1"],
            &[vec!["v0", "w0", "v1"], vec!["v0", "w1", "v1"]],
        )
        .unwrap();
        let labels = [("v0", "x0*y0"), ("w0", "x1*x2"), ("w1", "x0*x2^2"), ("v1", "x1*y1")]
            .map(|(v, m)| (v, ctx.parse_monomial(m).unwrap()));
        let l = LabeledComplex::from_vertex_labels(k, ctx.nvars(), labels).unwrap();
        (ctx, l)
    }

    #[test]
    fn lcm_labels_of_edges() {
        let (ctx, l) = bipyramid_example();
        let k = l.complex();
        let e = k.face_from_names(&["v0", "v1"]).unwrap();
        assert_eq!(ctx.render_monomial(l.label(e).unwrap()), "x0*x1*y0*y1");
        assert!(l.label(Face::EMPTY).unwrap().is_one());
        assert!(l.is_lcm());
        let general = LabeledComplex::new(k.clone(), 5, l.labels().to_vec()).unwrap();
        assert!(general.is_lcm());
    }

    #[test]
    fn single_vertex() {
        let ctx = ToricContext::product_of_projective(1, 1);
        let k = SimplicialComplex::simplex(&["a"]).unwrap();
        let m = ctx.parse_monomial("x0*y1").unwrap();
        let l = LabeledComplex::from_vertex_labels(k, 4, [("a", m.clone())]).unwrap();
        assert_eq!(l.label(Face::singleton(0)), Some(&m));
        assert!(l.label(Face::EMPTY).unwrap().is_one());
        let att = l.attainable_subcomplexes(None).unwrap();
        assert_eq!(att.len(), 2);
        assert_eq!(att[0].complex.all_faces(), &[Face::EMPTY]);
        assert_eq!(att[1].complex.num_vertices(), 1);
    }

    #[test]
    fn missing_label_is_rejected() {
        let k = SimplicialComplex::simplex(&["a", "b"]).unwrap();
        let r = LabeledComplex::from_vertex_labels(k, 2, [("a", Monomial::one(2))]);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn subcomplex_at_the_homology_degree() {
        let (ctx, l) = bipyramid_example();
        let m = ctx.parse_monomial("x0*x1*x2^2").unwrap();
        let sub = l.subcomplex_at(&m).unwrap();
        let k = l.complex();
        let expected = k.induced(k.face_from_names(&["w0", "w1"]).unwrap().bits());
        assert_eq!(sub, expected);
        assert_eq!(sub.facets().len(), 2);
        assert_eq!(l.subcomplex_at(&l.label_lcm()).unwrap(), *k);
        assert_eq!(l.subcomplex_at(&Monomial::one(5)).unwrap().all_faces(), &[Face::EMPTY]);
        let att = l.attainable_subcomplexes(None).unwrap();
        assert!(att.len() <= 16);
        assert!(att.iter().any(|a| a.witness == m && a.complex == expected));
    }

    #[test]
    fn truncation() {
        let (ctx, l) = bipyramid_example();
        let t = l.truncate_labels(&ctx.parse_monomial("x0*y0").unwrap()).unwrap();
        let w1 = l.complex().vertex_index("w1").unwrap();
        assert_eq!(ctx.render_monomial(t.vertex_label(w1).unwrap()), "x2^2");
        assert_eq!(l.truncate_labels(&Monomial::one(5)).unwrap(), l);
        let t = l.truncate_labels(&ctx.parse_monomial("x2*y1").unwrap()).unwrap();
        let got: Vec<String> = t
            .vertex_labels()
            .iter()
            .map(|(_, m)| ctx.render_monomial(m))
            .collect();
        assert_eq!(got, vec!["x0*y0", "x1", "x0", "x1"]);
        assert!(l.truncate_labels(&ctx.parse_monomial("x0^2").unwrap()).is_err());
    }

    #[test]
    fn subdivided_face_label() {
        let ctx = ToricContext::product_of_projective(2, 1);
        let k = SimplicialComplex::new(
            &["v0", "w0", "w1", "v1", "vp"],
            &[
                vec!["v0", "w0", "vp"],
                vec!["v0", "w1", "vp"],
                vec!["v1", "w0", "vp"],
                vec!["v1", "w1", "vp"],
            ],
        )
        .unwrap();
        let labels = [
            ("v0", "x0*y0"),
            ("w0", "x1*x2"),
            ("w1", "x0*x2^2"),
            ("v1", "x1*y1"),
            ("vp", "x0*x1"),
        ]
        .map(|(v, m)| (v, ctx.parse_monomial(m).unwrap()));
        let l = LabeledComplex::from_vertex_labels(k.clone(), 5, labels).unwrap();
        let f = k.face_from_names(&["v0", "vp", "w0"]).unwrap();
        // Componentwise maximum of (1,0,0,1,0), (1,1,0,0,0), (0,1,1,0,0).
        assert_eq!(l.label(f).unwrap().exponents(), &[1, 1, 1, 1, 0]);
    }

    #[test]
    fn non_lcm_labeling_is_detected() {
        let k = SimplicialComplex::simplex(&["a", "b"]).unwrap();
        let one = Monomial::one(1);
        let x = Monomial::new(vec![1]).unwrap();
        let x2 = Monomial::new(vec![2]).unwrap();
        let l = LabeledComplex::new(k.clone(), 1, vec![one.clone(), x.clone(), x.clone(), x2.clone()])
            .unwrap();
        assert!(!l.is_lcm());
        // Δ_x is the two points without the edge: not what the induced rule says.
        let sub = l.subcomplex_at(&x).unwrap();
        assert_eq!(sub.facets().len(), 2);
        assert!(LabeledComplex::new(k, 1, vec![one, x2.clone(), x, x2.clone()]).is_ok());
    }

    fn all_monomials(nvars: usize, max: u32) -> Vec<Monomial> {
        let mut out: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..nvars {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..=max).map(move |e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(|e| Monomial::new(e).unwrap()).collect()
    }

    fn arb_labeled() -> impl Strategy<Value = LabeledComplex> {
        (
            proptest::collection::vec(1u64..32, 1..5),
            proptest::collection::vec(proptest::collection::vec(0u32..=2, 4), 5),
        )
            .prop_map(|(facets, labels)| {
                let u = crate::simplicial::universe(&["a", "b", "c", "d", "e"]).unwrap();
                let k = SimplicialComplex::from_facets(u, facets.into_iter().map(Face::from_bits));
                let labels = labels
                    .into_iter()
                    .map(|e| Some(Monomial::new(e).unwrap()))
                    .collect();
                LabeledComplex::from_indexed_labels(k, 4, labels).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn attainable_list_is_exhaustive(l in arb_labeled()) {
            let att = l.attainable_subcomplexes(None).unwrap();
            let cap = l.max_label_exponent();
            for m in all_monomials(4, cap) {
                let sub = l.subcomplex_at(&m).unwrap();
                prop_assert!(att.iter().any(|a| a.complex == sub));
            }
            let masks = l.attainable_masks(&Monomial::one(4));
            prop_assert_eq!(masks.len(), att.len());
            for a in &att {
                prop_assert_eq!(l.subcomplex_at(&a.witness).unwrap(), a.complex.clone());
            }
        }

        #[test]
        fn subcomplexes_are_monotone_and_intersect(
            l in arb_labeled(),
            m in proptest::collection::vec(0u32..=2, 4),
            f in proptest::collection::vec(0u32..=2, 4),
            g in proptest::collection::vec(0u32..=2, 4),
        ) {
            let m = Monomial::new(m).unwrap();
            let f = Monomial::new(f).unwrap();
            let g = Monomial::new(g).unwrap();
            let fm = f.mul(&m).unwrap();
            let gm = g.mul(&m).unwrap();
            let at_m = l.subcomplex_at(&m).unwrap();
            let at_fm = l.subcomplex_at(&fm).unwrap();
            prop_assert!(at_m.is_subcomplex_of(&at_fm));
            let meet = l.subcomplex_at(&fm.gcd(&gm).unwrap()).unwrap();
            let at_gm = l.subcomplex_at(&gm).unwrap();
            let both: Vec<Face> = at_fm.all_faces().iter().copied().filter(|&s| at_gm.contains(s)).collect();
            prop_assert_eq!(meet.all_faces(), &both[..]);
            // Induced: a face is present whenever all its vertices are.
            for &s in l.complex().all_faces() {
                if s.vertices().all(|v| at_m.contains(Face::singleton(v))) {
                    prop_assert!(at_m.contains(s));
                }
            }
        }
    }
}
