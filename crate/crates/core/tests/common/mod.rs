#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use virtres::cli::{Document, Input};
use virtres::{Face, LabeledComplex, Monomial, SimplicialComplex, ToricContext};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> (Document, Input) {
    let doc = Document::load(&fixture_path(name)).expect("fixture parses");
    let input = doc.resolve().expect("fixture resolves");
    (doc, input)
}

pub const FIXTURES: [&str; 5] = ["bipyramid", "bipyramid_subdivided", "new_homology", "cone_point", "two_subdivisions"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_monomial(rng: &mut impl Rng, nvars: usize, max_exp: u32) -> Monomial {
    Monomial::new((0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect()).unwrap()
}

/// A complex on 3 to `max_vertices` vertices with up to four random facets.
pub fn random_complex(rng: &mut impl Rng, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(3..=max_vertices);
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let mut facets: Vec<Vec<String>> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let size = rng.gen_range(2..=n.min(4));
        let mut chosen: Vec<&String> = names.choose_multiple(rng, size).collect();
        chosen.sort();
        facets.push(chosen.into_iter().cloned().collect());
    }
    for name in &names {
        if !facets.iter().any(|f| f.contains(name)) {
            facets.push(vec![name.clone()]);
        }
    }
    SimplicialComplex::new(&names, &facets).unwrap()
}

pub fn random_labeling(rng: &mut impl Rng, ctx: &ToricContext, max_vertices: usize) -> LabeledComplex {
    let k = random_complex(rng, max_vertices);
    let labels: Vec<Option<Monomial>> = (0..k.universe().len())
        .map(|_| Some(random_monomial(rng, ctx.nvars(), 2)))
        .collect();
    LabeledComplex::from_indexed_labels(k, ctx.nvars(), labels).unwrap()
}

/// The random corpus: alternating between `P^1 x P^1` and `P^2 x P^1`.
pub fn corpus(seed: u64, size: usize) -> Vec<(ToricContext, LabeledComplex)> {
    let contexts = [
        ToricContext::product_of_projective(1, 1),
        ToricContext::product_of_projective(2, 1),
    ];
    let mut rng = rng(seed);
    (0..size)
        .map(|i| {
            let ctx = contexts[i % 2].clone();
            let l = random_labeling(&mut rng, &ctx, 6);
            (ctx, l)
        })
        .collect()
}

/// All monomials dividing `m`.
pub fn divisors(m: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &e in m.exponents() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=e).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|e| Monomial::new(e).unwrap()).collect()
}

/// Faces of dimension at least one.
pub fn subdividable_faces(l: &LabeledComplex) -> Vec<Face> {
    l.complex().all_faces().iter().copied().filter(|f| f.len() >= 2).collect()
}
