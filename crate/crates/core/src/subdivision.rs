//! Virtual compatible subdivisions and the homology-reduction checks that
//! accompany them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{
    augmented_chain_complex, dispatch, induced_map_on_homology, reduced_betti, Arith, Cycle,
    Field, PrimeField, Rationals,
};
use crate::labeled::LabeledComplex;
use crate::monomial::{Monomial, MonomialIdeal, ToricContext};
use crate::simplicial::{Face, SimplicialComplex};

/// A proposed stellar subdivision at a new vertex inside `omega`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivisionPlan {
    pub omega: Face,
    pub vertex: String,
    pub label: Monomial,
    /// The new label divides `ℓ(ω)`.
    pub divides_face_label: bool,
    /// The new label lies in `⟨ℓ(v) : v ∈ ω⟩ : B^∞`.
    pub in_saturation: bool,
}

impl SubdivisionPlan {
    pub fn is_virtual_compatible(&self) -> bool {
        self.divides_face_label && self.in_saturation
    }

    /// Fails with a message naming each violated condition.
    pub fn validate(&self, l: &LabeledComplex, ctx: &ToricContext) -> Result<()> {
        let k = l.complex();
        let mut problems = Vec::new();
        if !self.divides_face_label {
            problems.push(format!(
                "the label {} does not divide ℓ(ω) = {}",
                ctx.render_monomial(&self.label),
                ctx.render_monomial(l.label(self.omega).expect("ω is a face"))
            ));
        }
        if !self.in_saturation {
            problems.push(format!(
                "the label {} is not in the saturation of the ideal of the labels of {}",
                ctx.render_monomial(&self.label),
                k.render_face(self.omega)
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "subdivision is not virtual compatible: {}",
                problems.join("; ")
            )))
        }
    }
}

fn fresh_name(k: &SimplicialComplex) -> String {
    std::iter::once("vp".to_string())
        .chain((1..).map(|i| format!("vp{i}")))
        .find(|n| k.vertex_index(n).is_none())
        .expect("unbounded supply of names")
}

/// Evaluates both compatibility conditions for subdividing `omega` with a
/// new vertex labeled `label`. The vertex is named `vertex`, or a fresh
/// `vp`, `vp1`, ... when absent.
pub fn plan_subdivision(
    l: &LabeledComplex,
    omega: Face,
    label: Monomial,
    vertex: Option<&str>,
    ctx: &ToricContext,
) -> Result<SubdivisionPlan> {
    l.require_lcm("subdivision")?;
    if label.nvars() != l.nvars() || ctx.nvars() != l.nvars() {
        return Err(Error::Dimension {
            expected: l.nvars(),
            found: label.nvars(),
        });
    }
    let k = l.complex();
    let Some(face_label) = l.label(omega) else {
        return Err(Error::invalid(format!(
            "{} is not a face of the complex",
            k.render_face(omega)
        )));
    };
    if omega.len() < 2 {
        return Err(Error::invalid(
            "only faces of dimension at least one can be subdivided",
        ));
    }
    let vertex = vertex.map_or_else(|| fresh_name(k), str::to_string);
    let base = MonomialIdeal::new(
        l.nvars(),
        omega
            .vertices()
            .map(|v| l.vertex_label(v).expect("vertex").clone())
            .collect::<Vec<_>>(),
    )?;
    Ok(SubdivisionPlan {
        omega,
        divides_face_label: label.divides_unchecked(face_label),
        in_saturation: base.saturation_contains(&label, ctx.irrelevant())?,
        vertex,
        label,
    })
}

/// Applies the plan: stellar subdivision of the complex, lcm-labeling
/// generated from the old vertex labels and the plan's label. The new
/// vertex comes last in the vertex order.
pub fn apply_subdivision(l: &LabeledComplex, plan: &SubdivisionPlan) -> Result<LabeledComplex> {
    l.require_lcm("subdivision")?;
    if !l.complex().contains(plan.omega) || plan.omega.len() < 2 {
        return Err(Error::invalid(format!(
            "{} is not a face of dimension at least one",
            l.complex().render_face(plan.omega)
        )));
    }
    let (complex, vp) = l.complex().stellar_subdivide(plan.omega, &plan.vertex)?;
    let mut labels: Vec<Option<Monomial>> = (0..vp).map(|v| l.vertex_label(v).cloned()).collect();
    labels.push(Some(plan.label.clone()));
    let sub = LabeledComplex::from_indexed_labels(complex, l.nvars(), labels)?;
    for &f in sub.complex().all_faces() {
        if let Some(old) = l.label(f) {
            if sub.label(f) != Some(old) {
                return Err(Error::violation(format!(
                    "label of {} changed under subdivision",
                    l.complex().render_face(f)
                )));
            }
        }
    }
    Ok(sub)
}

/// A pair `(m, j)` where `H̃_j(Γ_m) -> H̃_j(Δ_m)` fails to be injective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisFailure {
    pub degree: Monomial,
    pub index: isize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub passed: bool,
    pub degrees_checked: usize,
    pub failures: Vec<HypothesisFailure>,
}

/// Degrees `m` with `ℓ'(v') | m` and no vertex of `ω` in `Δ_m`, given as
/// canonical witnesses and vertex masks.
fn reduction_region(l: &LabeledComplex, plan: &SubdivisionPlan) -> Vec<(Monomial, u64)> {
    let omega = plan.omega.bits();
    l.attainable_masks(&plan.label)
        .into_iter()
        .filter(|(_, mask)| mask & omega == 0)
        .collect()
}

/// Tests injectivity of `H̃_j(Γ_m) -> H̃_j(Δ_m)` for `Γ = lk_Δ(ω)`, all
/// `j >= -1`, at every `m` with `ℓ'(v') | m` and `ℓ(v) ∤ m` for `v ∈ ω`.
/// Every such `Δ_m` is attained at a canonical witness above `ℓ'(v')`, so
/// the check is exhaustive.
pub fn check_reduction_hypothesis(
    l: &LabeledComplex,
    plan: &SubdivisionPlan,
    field: Field,
) -> Result<HypothesisReport> {
    l.require_lcm("the reduction hypothesis")?;
    if !plan.is_virtual_compatible() {
        return Err(Error::invalid("the plan is not virtual compatible"));
    }
    let k = l.complex();
    let gamma = k.link(plan.omega)?;
    let region = reduction_region(l, plan);
    let mut failures = Vec::new();
    for (m, mask) in &region {
        let dm = k.induced(*mask);
        let gm = gamma.induced(*mask);
        for j in -1..=dm.dim().max(-1) {
            let map = induced_map_on_homology(&gm, &dm, j, field)?;
            if !map.injective {
                failures.push(HypothesisFailure {
                    degree: m.clone(),
                    index: j,
                    kernel_dim: betti_at(&gm, j, field) - map.rank,
                });
            }
        }
    }
    failures.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.degree.cmp(&b.degree)));
    Ok(HypothesisReport {
        passed: failures.is_empty(),
        degrees_checked: region.len(),
        failures,
    })
}

fn betti_at(k: &SimplicialComplex, j: isize, field: Field) -> usize {
    reduced_betti(k, field)
        .get((j + 1) as usize)
        .copied()
        .unwrap_or(0)
}

/// `dim H_index(F)_degree` before and after a subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionRow {
    pub index: usize,
    pub degree: Monomial,
    pub before: usize,
    pub after: usize,
    /// Where a strict drop is forced: `ℓ'(v') | m`, no vertex of `ω` in
    /// `Δ_m`, and `H̃_{i-1}(Γ_m)` maps nontrivially into `H̃_{i-1}(Δ_m)`.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub field: Field,
    pub hypothesis: HypothesisReport,
    pub rows: Vec<ReductionRow>,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.after <= r.before && (!r.strict || r.after < r.before))
    }

    /// Rows with more homology after the subdivision than before.
    pub fn increases(&self) -> impl Iterator<Item = &ReductionRow> {
        self.rows.iter().filter(|r| r.after > r.before)
    }
}

/// Side-by-side homology of `F_Δ` and `F_{Δ'}` over the union of both
/// attainable degree sets. Each degree's dimensions are computed in both
/// complexes at that exact degree.
pub fn compare_homology(
    l: &LabeledComplex,
    sub: &LabeledComplex,
    plan: &SubdivisionPlan,
    field: Field,
) -> Result<ReductionReport> {
    let hypothesis = check_reduction_hypothesis(l, plan, field)?;
    let gamma = l.complex().link(plan.omega)?;
    let degrees: BTreeSet<Monomial> = l
        .attainable_witnesses(None)?
        .into_iter()
        .chain(sub.attainable_witnesses(None)?)
        .collect();
    let omega_mask = plan.omega.bits();
    let mut rows = Vec::new();
    for m in degrees {
        let dm = l.subcomplex_at(&m)?;
        let before = reduced_betti(&dm, field);
        let after = reduced_betti(&sub.subcomplex_at(&m)?, field);
        let region = plan.label.divides_unchecked(&m) && dm.vertex_mask() & omega_mask == 0;
        let gm = if region { Some(gamma.induced(dm.vertex_mask())) } else { None };
        for i in 0..before.len().max(after.len()) {
            let b = before.get(i).copied().unwrap_or(0);
            let a = after.get(i).copied().unwrap_or(0);
            if a == 0 && b == 0 {
                continue;
            }
            let strict = match &gm {
                Some(gm) => induced_map_on_homology(gm, &dm, i as isize - 1, field)?.rank > 0,
                None => false,
            };
            rows.push(ReductionRow {
                index: i,
                degree: m.clone(),
                before: b,
                after: a,
                strict,
            });
        }
    }
    rows.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.degree.cmp(&b.degree)));
    Ok(ReductionReport {
        field,
        hypothesis,
        rows,
    })
}

/// Checks the homology-reduction inequalities for a subdivision whose
/// hypothesis holds: no degree gains homology, and the forced degrees lose
/// some.
pub fn verify_reduction(
    l: &LabeledComplex,
    sub: &LabeledComplex,
    plan: &SubdivisionPlan,
    field: Field,
) -> Result<ReductionReport> {
    let report = compare_homology(l, sub, plan, field)?;
    if !report.hypothesis.passed {
        return Err(Error::invalid(
            "the injectivity hypothesis fails for this subdivision",
        ));
    }
    if let Some(r) = report
        .rows
        .iter()
        .find(|r| r.after > r.before || (r.strict && r.after == r.before))
    {
        return Err(Error::violation(format!(
            "homology in index {} at {:?} went from {} to {}",
            r.index, r.degree, r.before, r.after
        )));
    }
    Ok(report)
}

/// Applies the strand of `ι_ω` to a chain of `Δ_m`, returning coordinates
/// in the face basis of `target`.
fn push_chain<A: Arith>(
    a: &A,
    chain: &[(Face, A::E)],
    omega: Face,
    vp: usize,
    target: &[Face],
) -> Result<Vec<A::E>> {
    let mut out = vec![a.zero(); target.len()];
    let cone = Face::singleton(vp);
    let mut add = |f: Face, x: A::E, neg: bool| -> Result<()> {
        let i = target
            .iter()
            .position(|&t| t == f)
            .ok_or_else(|| Error::invalid("image leaves the subdivided strand"))?;
        out[i] = if neg { a.sub(&out[i], &x) } else { a.add(&out[i], &x) };
        Ok(())
    };
    for (sigma, x) in chain {
        if !omega.is_subset_of(*sigma) {
            add(*sigma, x.clone(), false)?;
            continue;
        }
        for (j, u) in sigma.vertices().enumerate() {
            if omega.contains(u) {
                let t = sigma.minus(Face::singleton(u)).union(cone);
                let p = t.position(vp).expect("cone vertex");
                add(t, x.clone(), (j + p) % 2 == 1)?;
            }
        }
    }
    Ok(out)
}

/// Rank, source and target dimension of the map induced by `ι_ω` on
/// `H_i` in degree `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrandMapRank {
    pub rank: usize,
    pub source: usize,
    pub target: usize,
}

pub fn strand_map_rank(
    l: &LabeledComplex,
    sub: &LabeledComplex,
    plan: &SubdivisionPlan,
    m: &Monomial,
    i: usize,
    field: Field,
) -> Result<StrandMapRank> {
    let vp = subdivision_vertex(l, sub)?;
    let src = augmented_chain_complex(&l.subcomplex_at(m)?);
    let tgt = augmented_chain_complex(&sub.subcomplex_at(m)?);
    Ok(dispatch!(field, a => {
        let reps = if i < src.len() { src.homology_with(a, i) } else { Vec::new() };
        let target = if i < tgt.len() { tgt.homology_with(a, i).len() } else { 0 };
        let mut ech = if i < tgt.len() { Some(tgt.boundaries(a, i, 0)) } else { None };
        let mut rank = 0;
        for z in &reps {
            let chain: Vec<(Face, _)> = src.bases[i].iter().copied().zip(z.iter().cloned()).collect();
            let image = push_chain(a, &chain, plan.omega, vp, &tgt.bases[i])?;
            if ech.as_mut().is_some_and(|e| e.insert(image, None)) {
                rank += 1;
            }
        }
        StrandMapRank { rank, source: reps.len(), target }
    }))
}

fn subdivision_vertex(l: &LabeledComplex, sub: &LabeledComplex) -> Result<usize> {
    let n = l.complex().universe().len();
    if sub.complex().universe().len() != n + 1 || sub.complex().universe()[..n] != l.complex().universe()[..] {
        return Err(Error::invalid("the second complex is not a subdivision of the first"));
    }
    Ok(n)
}

/// Whether the class of `cycle`, a cycle of the degree-`m` strand of `F_Δ`,
/// dies under `ι_ω`.
pub fn kernel_membership(
    l: &LabeledComplex,
    sub: &LabeledComplex,
    plan: &SubdivisionPlan,
    cycle: &Cycle,
    m: &Monomial,
    field: Field,
) -> Result<bool> {
    let vp = subdivision_vertex(l, sub)?;
    if !plan.label.divides_unchecked(m) {
        return Err(Error::invalid("the new label must divide the degree"));
    }
    if cycle.is_zero() {
        return Ok(true);
    }
    let d = cycle.terms[0].0.len();
    if cycle.terms.iter().any(|(f, _)| f.len() != d) {
        return Err(Error::invalid("chain is not homogeneous"));
    }
    let src = augmented_chain_complex(&l.subcomplex_at(m)?);
    let tgt = augmented_chain_complex(&sub.subcomplex_at(m)?);
    if d >= src.len() {
        return Err(Error::invalid("chain is supported outside the strand"));
    }
    dispatch!(field, a => {
        let v = cycle.to_vector(a, &src.bases[d])?;
        if !src.is_cycle_with(a, d, &v) {
            return Err(Error::invalid("the chain is not a cycle"));
        }
        let chain: Vec<(Face, _)> = src.bases[d].iter().copied().zip(v).collect();
        let image = push_chain(a, &chain, plan.omega, vp, &tgt.bases[d])?;
        Ok(tgt.boundaries(a, d, 0).contains(image))
    })
}
