//! Bipyramid labelings over products of two projective spaces: the
//! virtuality classification, the subdivision that removes their homology,
//! and the standard virtual non-free example.

use serde::Serialize;

use crate::chain::build_complex;
use crate::error::{Error, Result};
use crate::homology::Field;
use crate::labeled::LabeledComplex;
use crate::monomial::{Monomial, ToricContext};
use crate::simplicial::{BipyramidWitness, SimplicialComplex};
use crate::subdivision::{apply_subdivision, plan_subdivision, SubdivisionPlan};
use crate::virtualcheck::{check_free, check_virtual};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    X,
    Y,
}

/// Base vertex `v_j` carries `var^{p_j}·m_j` with `m_j | lcm(ℓ(w0), ℓ(w1))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSplit {
    pub vertex: usize,
    pub variable: usize,
    pub exponent: u32,
    pub cofactor: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Classification {
    NotVirtual,
    /// Some base label divides `lcm(ℓ(w0), ℓ(w1))`. Such labelings are
    /// exactly the free ones.
    VirtualCase1 { vertex: usize },
    /// Every base label is a pure power of its own variable of one block
    /// times a divisor of `lcm(ℓ(w0), ℓ(w1))`.
    VirtualCase2 { block: Block, splits: Vec<PowerSplit> },
}

impl Classification {
    pub fn is_virtual(&self) -> bool {
        !matches!(self, Classification::NotVirtual)
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Classification::VirtualCase1 { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Classification::NotVirtual => "not_virtual",
            Classification::VirtualCase1 { .. } => "virtual_case1",
            Classification::VirtualCase2 { .. } => "virtual_case2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipyramidClassification {
    pub apexes: (usize, usize),
    pub base: Vec<usize>,
    /// `lcm(ℓ(w0), ℓ(w1))`.
    pub apex_lcm: Monomial,
    pub classification: Classification,
}

fn recognize(l: &LabeledComplex, ctx: &ToricContext) -> Result<(BipyramidWitness, Vec<usize>, Vec<usize>)> {
    l.require_lcm("the bipyramid classification")?;
    let blocks = ctx
        .product_blocks()
        .ok_or_else(|| Error::invalid("the context is not a product of two projective spaces"))?;
    if ctx.nvars() != l.nvars() {
        return Err(Error::Dimension {
            expected: ctx.nvars(),
            found: l.nvars(),
        });
    }
    let w = l
        .complex()
        .is_bipyramid()
        .ok_or_else(|| Error::invalid("the complex is not a bipyramid"))?;
    if w.base.len() != blocks.y.len() {
        return Err(Error::invalid(format!(
            "a bipyramid over a simplex with {} vertices is expected, found {}",
            blocks.y.len(),
            w.base.len()
        )));
    }
    Ok((w, blocks.x, blocks.y))
}

/// Lexicographically first bijection `base -> block` with every `v_j`
/// splitting as a positive power of its variable times a divisor of `f`.
fn power_splits(
    l: &LabeledComplex,
    base: &[usize],
    block: &[usize],
    f: &Monomial,
) -> Option<Vec<PowerSplit>> {
    fn search(
        l: &LabeledComplex,
        base: &[usize],
        block: &[usize],
        f: &Monomial,
        used: &mut Vec<bool>,
        out: &mut Vec<PowerSplit>,
    ) -> bool {
        let Some(&v) = base.get(out.len()) else {
            return true;
        };
        let label = l.vertex_label(v).expect("vertex");
        for (slot, &var) in block.iter().enumerate() {
            let exponent = label.exponent(var);
            if used[slot] || exponent == 0 {
                continue;
            }
            let cofactor = label.zero_out_unchecked(&Monomial::variable(label.nvars(), var));
            if !cofactor.divides_unchecked(f) {
                continue;
            }
            used[slot] = true;
            out.push(PowerSplit {
                vertex: v,
                variable: var,
                exponent,
                cofactor,
            });
            if search(l, base, block, f, used, out) {
                return true;
            }
            out.pop();
            used[slot] = false;
        }
        false
    }
    if base.len() > block.len() {
        return None;
    }
    let mut out = Vec::with_capacity(base.len());
    search(l, base, block, f, &mut vec![false; block.len()], &mut out).then_some(out)
}

/// Evaluates the two classification conditions directly on the labels.
pub fn classify_conditions(l: &LabeledComplex, ctx: &ToricContext) -> Result<BipyramidClassification> {
    let (w, x, y) = recognize(l, ctx)?;
    let label = |v: usize| l.vertex_label(v).expect("vertex");
    let f = label(w.apexes.0).lcm_unchecked(label(w.apexes.1));
    let base: Vec<usize> = w.base.vertices().collect();
    let classification = if let Some(&vertex) = base.iter().find(|&&v| label(v).divides_unchecked(&f)) {
        Classification::VirtualCase1 { vertex }
    } else if let Some(splits) = power_splits(l, &base, &y, &f) {
        Classification::VirtualCase2 {
            block: Block::Y,
            splits,
        }
    } else if let Some(splits) = (x.len() == y.len())
        .then(|| power_splits(l, &base, &x, &f))
        .flatten()
    {
        Classification::VirtualCase2 {
            block: Block::X,
            splits,
        }
    } else {
        Classification::NotVirtual
    };
    Ok(BipyramidClassification {
        apexes: w.apexes,
        base,
        apex_lcm: f,
        classification,
    })
}

/// [`classify_conditions`], confirmed against the general virtuality test.
pub fn classify(l: &LabeledComplex, ctx: &ToricContext, field: Field) -> Result<BipyramidClassification> {
    let c = classify_conditions(l, ctx)?;
    let v = check_virtual(l, ctx, field)?;
    if v.is_virtual != c.classification.is_virtual() || v.is_free != c.classification.is_free() {
        return Err(Error::violation(format!(
            "classification {} disagrees with the virtuality test (virtual: {}, free: {})",
            c.classification.name(),
            v.is_virtual,
            v.is_free
        )));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub plan: SubdivisionPlan,
    #[serde(skip)]
    pub result: LabeledComplex,
}

/// Subdivides the base simplex at a vertex labeled `lcm(m_0, ..., m_k)`.
/// The result is a free resolution of `S/(I + ⟨ℓ'(v')⟩)` of the same
/// length, with the same saturation as `I`.
pub fn eliminate_homology(l: &LabeledComplex, ctx: &ToricContext, field: Field) -> Result<Elimination> {
    let c = classify(l, ctx, field)?;
    let Classification::VirtualCase2 { splits, .. } = &c.classification else {
        return Err(Error::invalid(format!(
            "elimination needs a virtual non-free labeling, found {}",
            c.classification.name()
        )));
    };
    let label = splits
        .iter()
        .fold(Monomial::one(l.nvars()), |acc, s| acc.lcm_unchecked(&s.cofactor));
    let omega = crate::simplicial::Face::from_vertices(c.base.iter().copied());
    let plan = plan_subdivision(l, omega, label, None, ctx)?;
    plan.validate(l, ctx)?;
    let result = apply_subdivision(l, &plan)?;
    if !check_free(&result, field).is_free {
        return Err(Error::violation("the subdivided bipyramid still has homology"));
    }
    if build_complex(&result).length() != build_complex(l).length() {
        return Err(Error::violation("the subdivision changed the length of the complex"));
    }
    let b = ctx.irrelevant();
    if l.vertex_ideal().saturate(b)? != result.vertex_ideal().saturate(b)? {
        return Err(Error::violation("the subdivision changed the saturation"));
    }
    Ok(Elimination { plan, result })
}

/// The bipyramid over a `k`-simplex with base labels `y_i` and apex
/// labels `x_0`, `x_1`, over `P^n × P^k`. Vertices are `v0..vk, w0, w1`.
pub fn standard_virtual_labeling(n: usize, k: usize) -> Result<(ToricContext, LabeledComplex)> {
    if n < 1 || k > n {
        return Err(Error::invalid(format!(
            "need n >= k >= 0 and n >= 1, got n = {n}, k = {k}"
        )));
    }
    let ctx = ToricContext::product_of_projective(n, k);
    let base: Vec<String> = (0..=k).map(|i| format!("v{i}")).collect();
    let names: Vec<String> = base.iter().cloned().chain(["w0".into(), "w1".into()]).collect();
    let facets: Vec<Vec<String>> = ["w0", "w1"]
        .iter()
        .map(|w| base.iter().cloned().chain([w.to_string()]).collect())
        .collect();
    let complex = SimplicialComplex::new(&names, &facets)?;
    let nv = ctx.nvars();
    let labels = (0..=k)
        .map(|i| (format!("v{i}"), Monomial::variable(nv, n + 1 + i)))
        .chain([
            ("w0".to_string(), Monomial::variable(nv, 0)),
            ("w1".to_string(), Monomial::variable(nv, 1)),
        ]);
    let l = LabeledComplex::from_vertex_labels(complex, nv, labels)?;
    let v = check_virtual(&l, &ctx, Field::Rational)?;
    if !v.is_virtual || v.is_free {
        return Err(Error::violation("the standard labeling must be virtual and not free"));
    }
    Ok((ctx, l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::reduced_betti;

    fn bipyramid(ctx: &ToricContext, labels: [&str; 4]) -> LabeledComplex {
        let k = SimplicialComplex::new(
            &["v0", "w0", "w1", "v1"],
            &[vec!["v0", "w0", "v1"], vec!["v0", "w1", "v1"]],
        )
        .unwrap();
        let names = ["v0", "w0", "w1", "v1"];
        LabeledComplex::from_vertex_labels(
            k,
            ctx.nvars(),
            names.iter().zip(labels).map(|(n, m)| (*n, ctx.parse_monomial(m).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn standard_labelings() {
        let (ctx, l) = standard_virtual_labeling(2, 1).unwrap();
        let m = ctx.parse_monomial("x0*x1").unwrap();
        assert_eq!(reduced_betti(&l.subcomplex_at(&m).unwrap(), Field::Rational)[1], 1);
        let c = classify(&l, &ctx, Field::Rational).unwrap();
        let Classification::VirtualCase2 { block, splits } = &c.classification else {
            panic!("expected the second case, got {:?}", c.classification);
        };
        assert_eq!(*block, Block::Y);
        assert!(splits.iter().all(|s| s.exponent == 1 && s.cofactor.is_one()));
        let e = eliminate_homology(&l, &ctx, Field::Rational).unwrap();
        assert!(e.plan.label.is_one());
        assert!(e.result.vertex_ideal().is_unit());

        let (ctx, l) = standard_virtual_labeling(1, 0).unwrap();
        assert_eq!(l.complex().num_vertices(), 3);
        assert_eq!(l.complex().dim(), 1);
        assert!(classify(&l, &ctx, Field::Rational).unwrap().classification.is_virtual());

        let (ctx, l) = standard_virtual_labeling(3, 2).unwrap();
        assert_eq!(l.complex().num_vertices(), 5);
        assert_eq!(
            classify(&l, &ctx, Field::Rational).unwrap().classification.name(),
            "virtual_case2"
        );
        assert!(standard_virtual_labeling(1, 2).is_err());
        assert!(standard_virtual_labeling(0, 0).is_err());
    }

    #[test]
    fn first_example_is_case_two() {
        let ctx = ToricContext::product_of_projective(2, 1);
        let l = bipyramid(&ctx, ["x0*y0", "x1*x2", "x0*x2^2", "x1*y1"]);
        let c = classify(&l, &ctx, Field::Rational).unwrap();
        let Classification::VirtualCase2 { splits, .. } = &c.classification else {
            panic!("expected the second case");
        };
        let cofactors: Vec<String> = splits.iter().map(|s| ctx.render_monomial(&s.cofactor)).collect();
        assert_eq!(cofactors, vec!["x0", "x1"]);
        let e = eliminate_homology(&l, &ctx, Field::Rational).unwrap();
        assert_eq!(ctx.render_monomial(&e.plan.label), "x0*x1");
        assert_eq!(build_complex(&e.result).ranks(), vec![1, 5, 8, 4]);
    }

    #[test]
    fn case_one_is_free() {
        let ctx = ToricContext::product_of_projective(1, 1);
        let l = bipyramid(&ctx, ["x0", "x0*y0", "x1*y1", "y0^2"]);
        let c = classify(&l, &ctx, Field::Rational).unwrap();
        assert_eq!(c.classification, Classification::VirtualCase1 { vertex: 0 });
        assert!(check_free(&l, Field::Rational).is_free);
        assert!(eliminate_homology(&l, &ctx, Field::Rational).is_err());
    }

    #[test]
    fn template_with_powers() {
        let ctx = ToricContext::product_of_projective(1, 1);
        // f = x0*y1, g = x1*y0; m0 = x1, m1 = x0.
        let l = bipyramid(&ctx, ["y0^2*x1", "x0*y1", "x1*y0", "y1^2*x0"]);
        let c = classify(&l, &ctx, Field::Rational).unwrap();
        assert_eq!(c.classification.name(), "virtual_case2");
        let e = eliminate_homology(&l, &ctx, Field::Rational).unwrap();
        assert!(check_free(&e.result, Field::Rational).is_free);
    }

    #[test]
    fn not_virtual() {
        let ctx = ToricContext::product_of_projective(1, 1);
        let l = bipyramid(&ctx, ["x0^2*y0", "x0", "x1", "x1^2*y1"]);
        let c = classify(&l, &ctx, Field::Rational).unwrap();
        assert_eq!(c.classification, Classification::NotVirtual);
    }

    #[test]
    fn rejects_other_complexes() {
        let ctx = ToricContext::product_of_projective(1, 1);
        let k = SimplicialComplex::new(&["a", "b"], &[vec!["a", "b"]]).unwrap();
        let l = LabeledComplex::from_vertex_labels(
            k,
            4,
            [("a", ctx.parse_monomial("x0").unwrap()), ("b", ctx.parse_monomial("y0").unwrap())],
        )
        .unwrap();
        assert!(classify_conditions(&l, &ctx).is_err());
    }
}
