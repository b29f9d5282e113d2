//! Decision procedures for free and virtual resolutions, the ideals
//! `I(Δ, m)`, and the vertex-count bounds for virtual non-free complexes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{reduced_betti, Field, HomologyCache};
use crate::labeled::LabeledComplex;
use crate::monomial::{Monomial, MonomialIdeal, ToricContext};
use crate::simplicial::BipyramidWitness;

/// A degree where `H_index(F_Δ)` does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub degree: Monomial,
    /// Homological index `i >= 1`; the simplicial index is `i - 1`.
    pub index: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeCheck {
    pub is_free: bool,
    pub witnesses: Vec<Witness>,
}

/// Outcome of the truncated check for one generator `b` of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorVerdict {
    pub generator: Monomial,
    pub is_free: bool,
    /// Homology surviving every power of `b`, at `m'·b^D`.
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub is_free: bool,
    pub is_virtual: bool,
    pub field: Field,
    /// Higher homology of `F_Δ`.
    pub homology: Vec<Witness>,
    pub generators: Vec<GeneratorVerdict>,
}

impl Verdict {
    /// First witness of persistent homology, if the complex is not virtual.
    pub fn failure(&self) -> Option<&Witness> {
        self.generators.iter().flat_map(|g| &g.witnesses).next()
    }
}

fn witnesses_from(degree: &Monomial, betti: &[usize], out: &mut Vec<Witness>) {
    for (j, &dim) in betti.iter().enumerate().skip(1) {
        if dim > 0 {
            out.push(Witness {
                degree: degree.clone(),
                index: j,
                dim,
            });
        }
    }
}

fn sort_witnesses(w: &mut [Witness]) {
    w.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.degree.cmp(&b.degree)));
}

/// `H_i(F_Δ) = 0` for all `i > 0`, i.e. `H̃_j(Δ_m) = 0` for all attainable
/// `m` and `j >= 0`.
pub fn check_free(l: &LabeledComplex, field: Field) -> FreeCheck {
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    check_free_with(l, &mut cache)
}

/// As [`check_free`], reusing Betti numbers memoized on `l`'s complex.
pub fn check_free_with(l: &LabeledComplex, cache: &mut HomologyCache) -> FreeCheck {
    let mut witnesses = Vec::new();
    if l.is_lcm() && cache.serves(l.complex()) {
        for (m, mask) in l.attainable_masks(&Monomial::one(l.nvars())) {
            if !cache.acyclic(mask) {
                witnesses_from(&m, cache.betti(mask), &mut witnesses);
            }
        }
    } else {
        for att in l.attainable_subcomplexes(None).expect("floor is unset") {
            witnesses_from(&att.witness, &reduced_betti(&att.complex, cache.field()), &mut witnesses);
        }
    }
    sort_witnesses(&mut witnesses);
    FreeCheck {
        is_free: witnesses.is_empty(),
        witnesses,
    }
}

/// Decides whether `F_Δ` is a virtual resolution.
///
/// Let `D` exceed every exponent in every label. For a generator `b` of `B`
/// and `m = b^D·m'` with `supp(m') ∩ supp(b) = ∅`, the subcomplex `Δ_m`
/// equals `Δ^(b)_{m'}`, where `Δ^(b)` zeroes the `supp(b)` exponents of all
/// labels. Every `m` in a sufficiently high power of `B` is divisible by
/// some `b^D`, and conversely `b^d ∈ B^d`. So `F_Δ` is virtual exactly when
/// every truncation `Δ^(b)` is free.
pub fn check_virtual(l: &LabeledComplex, ctx: &ToricContext, field: Field) -> Result<Verdict> {
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    check_virtual_with(l, ctx, &mut cache)
}

pub fn check_virtual_with(
    l: &LabeledComplex,
    ctx: &ToricContext,
    cache: &mut HomologyCache,
) -> Result<Verdict> {
    if l.nvars() != ctx.nvars() {
        return Err(Error::Dimension {
            expected: ctx.nvars(),
            found: l.nvars(),
        });
    }
    let b = ctx.irrelevant();
    if !b.is_square_free() {
        return Err(Error::invalid("the irrelevant ideal must be square-free"));
    }
    let free = check_free_with(l, cache);
    let d = l.max_label_exponent() + 1;
    let mut generators = Vec::with_capacity(b.generators().len());
    for g in b.generators() {
        let truncated = l.truncate_labels(g)?;
        let check = if free.is_free {
            FreeCheck {
                is_free: true,
                witnesses: Vec::new(),
            }
        } else {
            check_free_with(&truncated, cache)
        };
        let lift = g.pow(d)?;
        let witnesses = check
            .witnesses
            .into_iter()
            .map(|w| Witness {
                degree: w.degree.mul(&lift).expect("same ring"),
                ..w
            })
            .collect();
        generators.push(GeneratorVerdict {
            generator: g.clone(),
            is_free: check.is_free,
            witnesses,
        });
    }
    Ok(Verdict {
        is_free: free.is_free,
        is_virtual: generators.iter().all(|g| g.is_free),
        field: cache.field(),
        homology: free.witnesses,
        generators,
    })
}

/// Bounded search straight from the definition: for `d = cap = 1 + max
/// exponent`, every `m` with exponents at most `cap` lying in `B^[d]` has
/// acyclic `Δ_m`. Exponential in the number of variables; meant as an
/// oracle for small inputs.
pub fn virtual_by_enumeration(l: &LabeledComplex, ctx: &ToricContext, field: Field) -> Result<bool> {
    l.require_lcm("bounded enumeration")?;
    let n = ctx.nvars();
    let cap = l.max_label_exponent() + 1;
    let powers: Vec<Monomial> = ctx
        .irrelevant()
        .generators()
        .iter()
        .map(|g| g.pow(cap))
        .collect::<Result<_>>()?;
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    let mut exps = vec![0u32; n];
    loop {
        let m = Monomial::new(exps.clone())?;
        if powers.iter().any(|p| p.divides_unchecked(&m)) && !cache.acyclic(l.vertex_mask_at(&m)) {
            return Ok(false);
        }
        let Some(i) = exps.iter().position(|&e| e < cap) else {
            return Ok(true);
        };
        exps[..i].iter_mut().for_each(|e| *e = 0);
        exps[i] += 1;
    }
}

/// `I(Δ, m) = ⟨f : H̃_j(Δ_{fm}) = 0 for all j >= 0⟩`.
///
/// Any such `f` is divisible by `w/m`, where `w` is the canonical witness
/// of `Δ_{fm}` above `m`, so the quotients `w/m` over acyclic attainable
/// subcomplexes generate.
pub fn annihilator_ideal(l: &LabeledComplex, m: &Monomial, field: Field) -> Result<MonomialIdeal> {
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    annihilator_ideal_with(l, m, &mut cache)
}

fn annihilator_ideal_with(
    l: &LabeledComplex,
    m: &Monomial,
    cache: &mut HomologyCache,
) -> Result<MonomialIdeal> {
    l.require_lcm("I(Δ, m)")?;
    if m.nvars() != l.nvars() {
        return Err(Error::Dimension {
            expected: l.nvars(),
            found: m.nvars(),
        });
    }
    let gens: Vec<Monomial> = l
        .attainable_masks(m)
        .into_iter()
        .filter(|(_, mask)| cache.acyclic(*mask))
        .map(|(w, _)| w.quotient_unchecked(m).expect("witness lies above the floor"))
        .collect();
    MonomialIdeal::new(l.nvars(), gens)
}

/// Starting from `m` with higher homology in `Δ_m`, repeatedly multiplies
/// `m` by a variable `x` with `x·g` a non-prime minimal generator of
/// `I(Δ, m)`, until the ideal is prime. Returns the final `m` and ideal.
pub fn prime_annihilator_loop(
    l: &LabeledComplex,
    m: &Monomial,
    field: Field,
) -> Result<(Monomial, MonomialIdeal)> {
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    let mut m = m.clone();
    let guard = l.label_lcm().degree() as usize + m.degree() as usize + 2;
    for _ in 0..guard {
        let ideal = annihilator_ideal_with(l, &m, &mut cache)?;
        if ideal.is_unit() {
            return Err(Error::invalid(format!(
                "Δ_m has no higher homology at {m:?}"
            )));
        }
        let Some(h) = ideal.generators().iter().find(|g| g.degree() > 1) else {
            return Ok((m, ideal));
        };
        let x = h.support().next().expect("non-constant generator");
        m = m.mul(&Monomial::variable(l.nvars(), x)).expect("same ring");
    }
    Err(Error::violation(
        "the annihilator loop failed to reach a prime ideal",
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexBound {
    pub degree: Monomial,
    pub subcomplex_vertices: usize,
    pub required: usize,
    pub slack: i64,
}

/// Vertex-count bound `|V(Δ)| >= c + |V(Δ_m)|` at every inclusion-maximal
/// `Δ_m` with higher homology, with `c` the codimension of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexBoundReport {
    pub vertices: usize,
    pub codimension: usize,
    pub bounds: Vec<VertexBound>,
}

impl VertexBoundReport {
    pub fn holds(&self) -> bool {
        self.bounds.iter().all(|b| b.slack >= 0)
    }
}

pub fn verify_min_vertices(
    l: &LabeledComplex,
    ctx: &ToricContext,
    field: Field,
) -> Result<VertexBoundReport> {
    l.require_lcm("the vertex bound")?;
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    verify_min_vertices_with(l, ctx, &mut cache)
}

pub fn verify_min_vertices_with(
    l: &LabeledComplex,
    ctx: &ToricContext,
    cache: &mut HomologyCache,
) -> Result<VertexBoundReport> {
    l.require_lcm("the vertex bound")?;
    let verdict = check_virtual_with(l, ctx, cache)?;
    if !verdict.is_virtual {
        return Err(Error::invalid("the vertex bound applies only to virtual resolutions"));
    }
    let c = ctx.irrelevant().codimension();
    let vertices = l.complex().num_vertices();
    let with_homology: Vec<(Monomial, u64)> = l
        .attainable_masks(&Monomial::one(l.nvars()))
        .into_iter()
        .filter(|(_, mask)| !cache.acyclic(*mask))
        .collect();
    let mut bounds: Vec<VertexBound> = with_homology
        .iter()
        .filter(|(_, mask)| {
            !with_homology
                .iter()
                .any(|(_, other)| other != mask && mask & other == *mask)
        })
        .map(|(m, mask)| {
            let sub = mask.count_ones() as usize;
            VertexBound {
                degree: m.clone(),
                subcomplex_vertices: sub,
                required: c + sub,
                slack: vertices as i64 - (c + sub) as i64,
            }
        })
        .collect();
    bounds.sort_by(|a, b| a.degree.cmp(&b.degree));
    Ok(VertexBoundReport {
        vertices,
        codimension: c,
        bounds,
    })
}

/// A virtual, non-free lcm-labeled complex on `c + 2` vertices is the
/// bipyramid `◇^{c-1}`. Returns its apexes and base.
pub fn verify_unique_minimum(
    l: &LabeledComplex,
    ctx: &ToricContext,
    field: Field,
) -> Result<BipyramidWitness> {
    let mut cache = HomologyCache::new(l.complex().clone(), field);
    verify_unique_minimum_with(l, ctx, &mut cache)
}

pub fn verify_unique_minimum_with(
    l: &LabeledComplex,
    ctx: &ToricContext,
    cache: &mut HomologyCache,
) -> Result<BipyramidWitness> {
    l.require_lcm("the bipyramid characterization")?;
    let c = ctx.irrelevant().codimension();
    let n = l.complex().num_vertices();
    if n != c + 2 {
        return Err(Error::invalid(format!(
            "expected {} vertices, found {n}",
            c + 2
        )));
    }
    let verdict = check_virtual_with(l, ctx, cache)?;
    if !verdict.is_virtual || verdict.is_free {
        return Err(Error::invalid("the complex must be virtual and not free"));
    }
    match l.complex().is_bipyramid() {
        Some(w) if w.base_dim() + 1 == c as isize => Ok(w),
        _ => Err(Error::violation(format!(
            "a minimal virtual non-free complex on {n} vertices is not a bipyramid"
        ))),
    }
}
