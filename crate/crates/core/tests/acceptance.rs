mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{corpus, divisors, fixture, rng, subdividable_faces};
use rand::seq::SliceRandom;
use virtres::bipyramid::{classify_conditions, eliminate_homology};
use virtres::chain::{build_complex, subdivision_chain_map};
use virtres::homology::{homology_table, reduced_betti, HomologyCache};
use virtres::subdivision::{
    apply_subdivision, check_reduction_hypothesis, plan_subdivision, SubdivisionPlan,
};
use virtres::virtualcheck::{
    check_free, check_virtual, check_virtual_with, verify_min_vertices_with, verify_unique_minimum_with,
    virtual_by_enumeration,
};
use virtres::{Face, Field, LabeledComplex, Monomial, MonomialIdeal, SimplicialComplex, ToricContext};

const FIELD: Field = Field::Rational;

/// Collected sub-check failures for one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// A subdivision performed somewhere in the suite.
struct Performed {
    before: LabeledComplex,
    after: LabeledComplex,
    omega: Face,
}

#[derive(Default)]
struct Suite {
    performed: Vec<Performed>,
    virtual_nonfree: Vec<(ToricContext, LabeledComplex)>,
    virtual_nonfree_seen: usize,
    constructed: Vec<LabeledComplex>,
}

fn mono(ctx: &ToricContext, s: &str) -> Monomial {
    ctx.parse_monomial(s).unwrap()
}

fn ideal(ctx: &ToricContext, gens: &[&str]) -> MonomialIdeal {
    MonomialIdeal::new(ctx.nvars(), gens.iter().map(|g| mono(ctx, g)).collect::<Vec<_>>()).unwrap()
}

fn plan(ctx: &ToricContext, l: &LabeledComplex, face: &[&str], label: &str) -> SubdivisionPlan {
    let omega = l.complex().face_from_names(face).unwrap();
    plan_subdivision(l, omega, mono(ctx, label), None, ctx).unwrap()
}

/// Higher homology entries `(i, degree, dim)`.
fn higher(ctx: &ToricContext, l: &LabeledComplex) -> Vec<(usize, String, usize)> {
    homology_table(l, FIELD, false)
        .higher()
        .map(|e| (e.index, ctx.render_monomial(&e.degree), e.dim))
        .collect()
}

impl Suite {
    fn subdivide(&mut self, l: &LabeledComplex, p: &SubdivisionPlan) -> LabeledComplex {
        let sub = apply_subdivision(l, p).unwrap();
        self.performed.push(Performed {
            before: l.clone(),
            after: sub.clone(),
            omega: p.omega,
        });
        self.constructed.push(sub.clone());
        sub
    }

    fn criterion1(&mut self, c: &mut Checks) {
        let (_, input) = fixture("bipyramid");
        let (ctx, l) = (&input.ctx, &input.labeled);
        self.constructed.push(l.clone());
        let v = check_virtual(l, ctx, FIELD).unwrap();
        c.expect(v.is_virtual, "bipyramid should be virtual");
        c.expect(!v.is_free, "bipyramid should not be free");
        let h = higher(ctx, l);
        c.expect(
            h == vec![(1, "x0*x1*x2^2".to_string(), 1)],
            format!("higher homology is {h:?}"),
        );
        let ranks = build_complex(l).ranks();
        c.expect(ranks == vec![1, 4, 5, 2], format!("ranks {ranks:?}"));
        c.note(format!("virtual {}, free {}, homology {h:?}, ranks {ranks:?}", v.is_virtual, v.is_free));
    }

    fn criterion2(&mut self, c: &mut Checks) {
        let (_, input) = fixture("bipyramid");
        let (ctx, l) = (&input.ctx, &input.labeled);
        let b = ctx.irrelevant();
        let sat = ideal(ctx, &["x0*y0", "x1*y1"]).saturate(b).unwrap();
        c.expect(
            sat == ideal(ctx, &["x0*x1"]),
            format!("saturate(<x0*y0, x1*y1>, B) = {}, expected <x0*x1>", ctx.render_ideal(&sat)),
        );
        let p = plan(ctx, l, &["v0", "v1"], "x0*x1");
        c.expect(p.is_virtual_compatible(), "plan {v0,v1}/x0*x1 should be compatible");
        let sub = self.subdivide(l, &p);
        let ranks = build_complex(&sub).ranks();
        c.expect(ranks == vec![1, 5, 8, 4], format!("subdivided ranks {ranks:?}"));
        c.expect(check_free(&sub, FIELD).is_free, "subdivision should be free");
        let j = sub.vertex_ideal();
        c.expect(
            j == ideal(ctx, &["x0*x1", "x0*y0", "x1*x2", "x1*y1", "x0*x2^2"]),
            format!("J = {}", ctx.render_ideal(&j)),
        );
        let (si, sj) = (l.vertex_ideal().saturate(b).unwrap(), j.saturate(b).unwrap());
        c.expect(si == sj, "saturations of I and J differ");
        c.note(format!(
            "saturate = {}, ranks {ranks:?}, J = {}",
            ctx.render_ideal(&sat),
            ctx.render_ideal(&j)
        ));
    }

    fn criterion3(&mut self, c: &mut Checks) {
        let (_, input) = fixture("new_homology");
        let (ctx, l) = (&input.ctx, &input.labeled);
        self.constructed.push(l.clone());
        let before = higher(ctx, l);
        c.expect(
            before == vec![(1, "x0*x1*y0*y1^2".to_string(), 1)],
            format!("before: {before:?}"),
        );
        let p = plan(ctx, l, &["u0", "u4"], "x0*x1*y0*y1");
        c.expect(p.is_virtual_compatible(), "plan should be compatible");
        let hyp = check_reduction_hypothesis(l, &p, FIELD).unwrap();
        c.expect(!hyp.passed, "hypothesis check should fail");
        let sub = self.subdivide(l, &p);
        let after = higher(ctx, &sub);
        c.expect(
            after == vec![(2, "x0^2*x1*y0^2*y1^2".to_string(), 1)],
            format!("after: {after:?}"),
        );
        c.note(format!("before {before:?}, after {after:?}, hypothesis passed {}", hyp.passed));
    }

    fn criterion4(&mut self, c: &mut Checks) {
        let (_, input) = fixture("cone_point");
        let (ctx, l) = (&input.ctx, &input.labeled);
        self.constructed.push(l.clone());
        let before = higher(ctx, l);
        c.expect(
            before == vec![(2, "x0*x1*y0*y1^2".to_string(), 1)],
            format!("before: {before:?}, expected H_2 dim 1 at x0*x1*y0*y1^2"),
        );
        let p = plan(ctx, l, &["u0", "u5"], "x0^2*x1*y0");
        c.expect(p.is_virtual_compatible(), "plan should be compatible");
        let sub = self.subdivide(l, &p);
        c.expect(check_free(&sub, FIELD).is_free, "subdivision should be free");
        c.note(format!("before {before:?}, after {:?}", higher(ctx, &sub)));
    }

    fn criterion5(&mut self, c: &mut Checks) {
        let (_, input) = fixture("two_subdivisions");
        let (ctx, l) = (&input.ctx, &input.labeled);
        self.constructed.push(l.clone());
        let mut before = higher(ctx, l);
        before.sort();
        let mut expected = vec![
            (1, "x0*x1*y0*y1^2".to_string(), 1),
            (1, "x0^3*x1^2*y0".to_string(), 1),
        ];
        expected.sort();
        c.expect(before == expected, format!("before: {before:?}"));
        let p1 = plan(ctx, l, &["u0", "u3"], "x0^2*x1*y0");
        c.expect(p1.is_virtual_compatible(), "first plan should be compatible");
        c.expect(
            check_reduction_hypothesis(l, &p1, FIELD).unwrap().passed,
            "first plan fails the hypothesis",
        );
        let s1 = self.subdivide(l, &p1);
        let p2 = plan(ctx, &s1, &["u1", "u5"], "x0*x1*y0*y1^2");
        c.expect(p2.is_virtual_compatible(), "second plan should be compatible");
        c.expect(
            check_reduction_hypothesis(&s1, &p2, FIELD).unwrap().passed,
            "second plan fails the hypothesis",
        );
        let s2 = self.subdivide(&s1, &p2);
        c.expect(check_free(&s2, FIELD).is_free, "final complex should be free");
        c.note(format!("before {before:?}, middle {:?}, final {:?}", higher(ctx, &s1), higher(ctx, &s2)));
    }

    fn criteria6and7(&mut self, c6: &mut Checks, c7: &mut Checks) {
        let corpus = corpus(0x5eed, 240);
        let (mut disagree, mut strands, mut strand_bad) = (0, 0, 0);
        for (ctx, l) in &corpus {
            self.constructed.push(l.clone());
            let v = check_virtual(l, ctx, FIELD).unwrap();
            let oracle = virtual_by_enumeration(l, ctx, FIELD).unwrap();
            if v.is_virtual != oracle {
                disagree += 1;
            }
            if v.is_virtual && !v.is_free {
                self.virtual_nonfree.push((ctx.clone(), l.clone()));
            }
            let f = build_complex(l);
            for alpha in l.attainable_witnesses(None).unwrap() {
                strands += 1;
                let mut strand = f.strand(&alpha).unwrap().homology_dims(FIELD);
                let mut direct = reduced_betti(&l.subcomplex_at(&alpha).unwrap(), FIELD);
                let n = strand.len().max(direct.len());
                strand.resize(n, 0);
                direct.resize(n, 0);
                if strand != direct {
                    strand_bad += 1;
                }
            }
        }
        c6.expect(disagree == 0, format!("{disagree} disagreements"));
        c6.note(format!(
            "{} complexes, {} virtual non-free, {disagree} disagreements",
            corpus.len(),
            self.virtual_nonfree.len()
        ));
        c7.expect(strand_bad == 0, format!("{strand_bad} disagreements"));
        c7.note(format!("{strands} attainable degrees, {strand_bad} disagreements"));
    }

    fn criterion8(&mut self, c: &mut Checks) {
        let mut checked = 0;
        let check = |c: &mut Checks, ctx: &ToricContext, l: &LabeledComplex, sub: &LabeledComplex, what: &str| {
            let b = ctx.irrelevant();
            if check_virtual(l, ctx, FIELD).unwrap().is_virtual {
                c.expect(check_virtual(sub, ctx, FIELD).unwrap().is_virtual, format!("{what}: not virtual"));
            }
            c.expect(
                l.vertex_ideal().saturate(b).unwrap() == sub.vertex_ideal().saturate(b).unwrap(),
                format!("{what}: saturations differ"),
            );
        };
        let fixture_plans: [(&str, &[&str], &str); 4] = [
            ("bipyramid", &["v0", "v1"], "x0*x1"),
            ("new_homology", &["u0", "u4"], "x0*x1*y0*y1"),
            ("cone_point", &["u0", "u5"], "x0^2*x1*y0"),
            ("two_subdivisions", &["u0", "u3"], "x0^2*x1*y0"),
        ];
        for (name, face, label) in fixture_plans {
            let (_, input) = fixture(name);
            let (ctx, l) = (&input.ctx, &input.labeled);
            let p = plan(ctx, l, face, label);
            let sub = self.subdivide(l, &p);
            check(c, ctx, l, &sub, name);
            checked += 1;
        }
        {
            let (_, input) = fixture("bipyramid");
            let e = eliminate_homology(&input.labeled, &input.ctx, FIELD).unwrap();
            self.performed.push(Performed {
                before: input.labeled.clone(),
                after: e.result.clone(),
                omega: e.plan.omega,
            });
            check(c, &input.ctx, &input.labeled, &e.result, "bipyramid elimination");
            checked += 1;
        }
        let pool: Vec<(ToricContext, LabeledComplex)> = corpus(0xc0ffee, 400)
            .into_iter()
            .filter(|(ctx, l)| check_virtual(l, ctx, FIELD).unwrap().is_virtual)
            .collect();
        let mut rng = rng(8);
        let mut random = 0;
        let mut attempts = 0;
        while random < 50 && attempts < 5000 {
            attempts += 1;
            let (ctx, l) = pool.choose(&mut rng).unwrap();
            let faces = subdividable_faces(l);
            let Some(&omega) = faces.choose(&mut rng) else { continue };
            let label = l.label(omega).unwrap();
            let candidates: Vec<SubdivisionPlan> = divisors(label)
                .into_iter()
                .map(|m| plan_subdivision(l, omega, m, None, ctx).unwrap())
                .filter(|p| p.is_virtual_compatible())
                .collect();
            let Some(p) = candidates.choose(&mut rng) else { continue };
            let sub = self.subdivide(l, p);
            check(c, ctx, l, &sub, &format!("random plan {random}"));
            random += 1;
        }
        c.expect(random == 50, format!("only {random} random plans found"));
        c.note(format!("{} plans ({} random)", checked + random, random));
    }

    fn criterion9(&mut self, c: &mut Checks) {
        let start = Instant::now();
        let ctx = ToricContext::product_of_projective(1, 1);
        let k = SimplicialComplex::new(
            &["v0", "w0", "w1", "v1"],
            &[vec!["v0", "w0", "v1"], vec!["v0", "w1", "v1"]],
        )
        .unwrap();
        let mut cache = HomologyCache::new(k.clone(), FIELD);
        let monomials: Vec<Monomial> = (0..81u32)
            .map(|code| Monomial::new((0..4).map(|i| code / 3u32.pow(i) % 3).collect()).unwrap())
            .collect();
        // Variable permutations preserving the block structure of P^1 x P^1.
        let perms: [[usize; 4]; 8] = [
            [0, 1, 2, 3],
            [1, 0, 2, 3],
            [0, 1, 3, 2],
            [1, 0, 3, 2],
            [2, 3, 0, 1],
            [3, 2, 0, 1],
            [2, 3, 1, 0],
            [3, 2, 1, 0],
        ];
        let act: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                (0..81usize)
                    .map(|code| {
                        let e: Vec<usize> = (0..4).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                        (0..4).map(|i| e[i] * 3usize.pow(p[i] as u32)).sum()
                    })
                    .collect()
            })
            .collect();
        let key = |v0: usize, v1: usize, w0: usize, w1: usize| (v0.min(v1), v0.max(v1), w0.min(w1), w0.max(w1));
        let (mut reps, mut disagree, mut virtual_count) = (0usize, 0usize, 0usize);
        for v0 in 0..81 {
            for v1 in v0..81 {
                for w0 in 0..81 {
                    for w1 in w0..81 {
                        let here = (v0, v1, w0, w1);
                        if act[1..]
                            .iter()
                            .any(|a| key(a[v0], a[v1], a[w0], a[w1]) < here)
                        {
                            continue;
                        }
                        reps += 1;
                        let labels = [v0, w0, w1, v1].map(|i| Some(monomials[i].clone())).to_vec();
                        let l = LabeledComplex::from_indexed_labels(k.clone(), 4, labels).unwrap();
                        let verdict = check_virtual_with(&l, &ctx, &mut cache).unwrap();
                        let class = classify_conditions(&l, &ctx).unwrap().classification;
                        if class.is_virtual() != verdict.is_virtual || class.is_free() != verdict.is_free {
                            disagree += 1;
                        }
                        if verdict.is_virtual {
                            virtual_count += 1;
                            if !verdict.is_free {
                                self.record_virtual_nonfree(&ctx, &l, &mut cache);
                            }
                        }
                    }
                }
            }
        }
        let exhaustive = start.elapsed();
        let ctx2 = ToricContext::product_of_projective(2, 1);
        let mut cache2 = HomologyCache::new(k.clone(), FIELD);
        let mut rng = rng(9);
        let sampled = 20_000;
        let mut disagree2 = 0;
        for _ in 0..sampled {
            let labels = (0..4)
                .map(|_| Some(common::random_monomial(&mut rng, 5, 2)))
                .collect();
            let l = LabeledComplex::from_indexed_labels(k.clone(), 5, labels).unwrap();
            let verdict = check_virtual_with(&l, &ctx2, &mut cache2).unwrap();
            let class = classify_conditions(&l, &ctx2).unwrap().classification;
            if class.is_virtual() != verdict.is_virtual || class.is_free() != verdict.is_free {
                disagree2 += 1;
            }
            if verdict.is_virtual && !verdict.is_free {
                self.record_virtual_nonfree(&ctx2, &l, &mut cache2);
            }
        }
        c.expect(disagree == 0, format!("{disagree} disagreements over P^1 x P^1"));
        c.expect(disagree2 == 0, format!("{disagree2} disagreements over P^2 x P^1"));
        c.note(format!(
            "P^1 x P^1: {reps} orbit representatives of 81^4 labelings, {virtual_count} virtual, \
             {disagree} disagreements ({:.1}s); P^2 x P^1: {sampled} sampled, {disagree2} disagreements",
            exhaustive.as_secs_f64()
        ));
    }

    /// Checks the vertex bound and the bipyramid characterization right away
    /// so the large exhaustive run does not have to keep its instances.
    fn record_virtual_nonfree(&mut self, ctx: &ToricContext, l: &LabeledComplex, cache: &mut HomologyCache) {
        self.virtual_nonfree_seen += 1;
        let ok = verify_min_vertices_with(l, ctx, cache).map(|r| r.holds()).unwrap_or(false)
            && (l.complex().num_vertices() != ctx.irrelevant().codimension() + 2
                || verify_unique_minimum_with(l, ctx, cache).is_ok());
        if !ok {
            self.virtual_nonfree.push((ctx.clone(), l.clone()));
        }
    }

    fn criterion10(&mut self, c: &mut Checks, corpus_instances: Vec<(ToricContext, LabeledComplex)>) {
        let (mut bound_ok, mut minimal, mut failures) = (0, 0, 0);
        for (ctx, l) in &corpus_instances {
            let mut cache = HomologyCache::new(l.complex().clone(), FIELD);
            let report = verify_min_vertices_with(l, ctx, &mut cache).unwrap();
            if report.holds() {
                bound_ok += 1;
            } else {
                failures += 1;
            }
            if l.complex().num_vertices() == report.codimension + 2 {
                minimal += 1;
                if verify_unique_minimum_with(l, ctx, &mut cache).is_err() {
                    failures += 1;
                }
            }
        }
        // Failures from the exhaustive run were kept in `virtual_nonfree`.
        let exhaustive_failures = self.virtual_nonfree.len();
        c.expect(
            failures == 0 && exhaustive_failures == 0,
            format!("{failures} random-corpus failures, {exhaustive_failures} bipyramid-run failures"),
        );
        c.note(format!(
            "{} random-corpus instances ({bound_ok} within the bound, {minimal} on c+2 vertices), \
             {} bipyramid instances checked",
            corpus_instances.len(),
            self.virtual_nonfree_seen
        ));
    }

    fn criterion11(&mut self, c: &mut Checks) {
        let mut bad_d2 = 0;
        for l in &self.constructed {
            if !build_complex(l).check_d_squared() {
                bad_d2 += 1;
            }
        }
        let (mut bad_commute, mut bad_rank) = (0, 0);
        for p in &self.performed {
            let vp = p.after.complex().universe().len() - 1;
            let (fs, ft) = (build_complex(&p.before), build_complex(&p.after));
            let iota = subdivision_chain_map(&p.before, &p.after, p.omega, vp).unwrap();
            if !iota.commutes(&fs, &ft) {
                bad_commute += 1;
            }
            if !iota.full_column_rank(p.before.nvars()) {
                bad_rank += 1;
            }
            if !ft.check_d_squared() {
                bad_d2 += 1;
            }
        }
        c.expect(bad_d2 == 0, format!("{bad_d2} complexes with d^2 != 0"));
        c.expect(bad_commute == 0, format!("{bad_commute} comparison maps do not commute"));
        c.expect(bad_rank == 0, format!("{bad_rank} comparison maps lack full column rank"));
        c.note(format!(
            "{} complexes, {} subdivisions",
            self.constructed.len(),
            self.performed.len()
        ));
    }
}

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let mut results: Vec<(usize, Checks)> = Vec::new();
    let mut run = |n: usize, f: &mut dyn FnMut(&mut Checks)| {
        let mut c = Checks::default();
        if let Err(e) = catch_unwind(AssertUnwindSafe(|| f(&mut c))) {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            c.failures.push(format!("panicked: {msg}"));
        }
        let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        let detail = if c.failures.is_empty() {
            c.notes.join("; ")
        } else {
            c.failures.join("; ")
        };
        println!("criterion {n}: {status} ({detail})");
        results.push((n, c));
    };
    run(1, &mut |c| suite.criterion1(c));
    run(2, &mut |c| suite.criterion2(c));
    run(3, &mut |c| suite.criterion3(c));
    run(4, &mut |c| suite.criterion4(c));
    run(5, &mut |c| suite.criterion5(c));
    let mut c7 = Checks::default();
    run(6, &mut |c| suite.criteria6and7(c, &mut c7));
    run(7, &mut |c| {
        c.failures.append(&mut c7.failures);
        c.notes.append(&mut c7.notes);
    });
    let corpus_instances = std::mem::take(&mut suite.virtual_nonfree);
    run(8, &mut |c| suite.criterion8(c));
    run(9, &mut |c| suite.criterion9(c));
    run(10, &mut |c| suite.criterion10(c, corpus_instances.clone()));
    run(11, &mut |c| suite.criterion11(c));
    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, c)| !c.failures.is_empty())
        .map(|(n, _)| *n)
        .collect();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

