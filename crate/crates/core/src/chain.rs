//! The free complex `F_Δ` of a labeled complex, its fine-degree strands,
//! and the comparison map `ι_ω` into a subdivision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{rank, FieldComplex, PrimeField};
use crate::labeled::LabeledComplex;
use crate::monomial::{Monomial, ToricContext};
use crate::simplicial::{Face, SimplicialComplex};

/// Basis element of a free module: a face and the degree of its label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub face: Face,
    pub degree: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub row: usize,
    pub sign: i8,
    pub coeff: Monomial,
}

/// Sparse matrix with signed monomial entries, stored by column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<Entry>>,
}

impl MonomialMatrix {
    pub fn entry(&self, row: usize, col: usize) -> Option<&Entry> {
        self.columns[col].iter().find(|e| e.row == row)
    }

    /// Matrix of signs with rows and columns restricted to the given index sets.
    fn restrict_signs(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            row_pos[r] = i;
        }
        let mut out = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, &c) in cols.iter().enumerate() {
            for e in &self.columns[c] {
                if row_pos[e.row] != usize::MAX {
                    out[row_pos[e.row]][j] = e.sign as i64;
                }
            }
        }
        out
    }
}

type Polynomial = BTreeMap<Monomial, i64>;

fn add_term(p: &mut Polynomial, m: Monomial, c: i64) {
    let slot = p.entry(m.clone()).or_insert(0);
    *slot += c;
    if *slot == 0 {
        p.remove(&m);
    }
}

/// `F_Δ`: term `i` has one generator per face of dimension `i - 1`.
#[derive(Clone, Debug)]
pub struct FreeChainComplex {
    nvars: usize,
    complex: SimplicialComplex,
    terms: Vec<Vec<Generator>>,
    // differentials[i - 1] is ∂_i : F_i -> F_{i-1}.
    differentials: Vec<MonomialMatrix>,
}

pub fn build_complex(l: &LabeledComplex) -> FreeChainComplex {
    let k = l.complex();
    let top = if k.is_void() { 0 } else { (k.dim() + 2) as usize };
    let terms: Vec<Vec<Generator>> = (0..top)
        .map(|i| {
            k.faces(i as isize - 1)
                .iter()
                .map(|&face| Generator {
                    face,
                    degree: l.label(face).expect("face of the complex").clone(),
                })
                .collect()
        })
        .collect();
    let differentials = (1..top)
        .map(|i| {
            let columns = terms[i]
                .iter()
                .map(|g| {
                    let mut col: Vec<Entry> = g
                        .face
                        .boundary()
                        .map(|(sign, _, t)| {
                            let row = k.index_in_dim(t).expect("complex is closed");
                            let lt = &terms[i - 1][row].degree;
                            Entry {
                                row,
                                sign: sign as i8,
                                coeff: g
                                    .degree
                                    .quotient_unchecked(lt)
                                    .expect("labels increase along inclusions"),
                            }
                        })
                        .collect();
                    col.sort_by_key(|e| e.row);
                    col
                })
                .collect();
            MonomialMatrix {
                rows: terms[i - 1].len(),
                cols: terms[i].len(),
                columns,
            }
        })
        .collect();
    FreeChainComplex {
        nvars: l.nvars(),
        complex: k.clone(),
        terms,
        differentials,
    }
}

impl FreeChainComplex {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest homological degree with a nonzero term.
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn terms(&self) -> &[Vec<Generator>] {
        &self.terms
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }

    /// `∂_i`, defined for `1 <= i < len()`.
    pub fn differential(&self, i: usize) -> Option<&MonomialMatrix> {
        i.checked_sub(1).and_then(|j| self.differentials.get(j))
    }

    /// `ℓ(τ)·entry = ℓ(σ)` for every nonzero entry `(τ, σ)`.
    pub fn degrees_consistent(&self) -> bool {
        (1..self.len()).all(|i| {
            let d = &self.differentials[i - 1];
            d.columns.iter().enumerate().all(|(c, col)| {
                col.iter().all(|e| {
                    self.terms[i - 1][e.row]
                            .degree
                            .mul(&e.coeff)
                            .is_ok_and(|p| p == self.terms[i][c].degree)
                })
            })
        })
    }

    /// `∂_{i-1} ∘ ∂_i = 0` with exact polynomial arithmetic.
    pub fn check_d_squared(&self) -> bool {
        (2..self.len()).all(|i| {
            let outer = &self.differentials[i - 2];
            let inner = &self.differentials[i - 1];
            inner.columns.iter().all(|col| {
                let mut acc: BTreeMap<usize, Polynomial> = BTreeMap::new();
                for e in col {
                    for f in &outer.columns[e.row] {
                        add_term(
                            acc.entry(f.row).or_default(),
                            e.coeff.mul(&f.coeff).expect("same ring"),
                            e.sign as i64 * f.sign as i64,
                        );
                    }
                }
                acc.values().all(|p| p.is_empty())
            })
        })
    }

    /// The degree-`α` strand: faces with `ℓ(σ) | α` and the restricted signs.
    pub fn strand(&self, alpha: &Monomial) -> Result<FieldComplex> {
        if alpha.nvars() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: alpha.nvars(),
            });
        }
        let keep: Vec<Vec<usize>> = self
            .terms
            .iter()
            .map(|t| {
                t.iter()
                    .enumerate()
                    .filter(|(_, g)| g.degree.divides_unchecked(alpha))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let bases = keep
            .iter()
            .zip(&self.terms)
            .map(|(idx, t)| idx.iter().map(|&i| t[i].face).collect())
            .collect();
        let mut maps = vec![Vec::new()];
        for i in 1..self.len() {
            maps.push(self.differentials[i - 1].restrict_signs(&keep[i - 1], &keep[i]));
        }
        Ok(FieldComplex { bases, maps })
    }

    /// Renders `∂_i` with rows indexed by the target basis. Zero entries
    /// are left blank.
    pub fn render_differential(&self, ctx: &ToricContext, i: usize) -> Option<String> {
        let d = self.differential(i)?;
        let row_names: Vec<String> = self.terms[i - 1]
            .iter()
            .map(|g| self.complex.render_face(g.face))
            .collect();
        let col_names: Vec<String> = self.terms[i]
            .iter()
            .map(|g| self.complex.render_face(g.face))
            .collect();
        let cells: Vec<Vec<String>> = (0..d.rows)
            .map(|r| {
                (0..d.cols)
                    .map(|c| match d.entry(r, c) {
                        None => String::new(),
                        Some(e) => render_entry(ctx, e),
                    })
                    .collect()
            })
            .collect();
        Some(render_grid(&row_names, &col_names, &cells))
    }

    /// Every differential in order, or `no terms` for the void complex.
    pub fn render(&self, ctx: &ToricContext) -> String {
        if self.is_empty() {
            return "no terms\n".to_string();
        }
        let mut out = String::new();
        let ranks: Vec<String> = self.ranks().iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "ranks: ({})", ranks.join(","));
        for i in 1..self.len() {
            let _ = writeln!(
                out,
                "d{i}: S^{} <- S^{}",
                self.terms[i - 1].len(),
                self.terms[i].len()
            );
            out.push_str(&self.render_differential(ctx, i).expect("in range"));
        }
        out
    }
}

fn render_entry(ctx: &ToricContext, e: &Entry) -> String {
    let m = ctx.render_monomial(&e.coeff);
    if e.sign < 0 {
        format!("-{m}")
    } else {
        m
    }
}

fn render_grid(rows: &[String], cols: &[String], cells: &[Vec<String>]) -> String {
    let label_w = rows.iter().map(String::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols.len())
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].len())
                .chain(std::iter::once(cols[c].len()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let mut line = format!("{:label_w$}", "");
    for (c, name) in cols.iter().enumerate() {
        let _ = write!(line, "  {:>w$}", name, w = widths[c]);
    }
    out.push_str(line.trim_end());
    out.push('\n');
    for (r, name) in rows.iter().enumerate() {
        let mut line = format!("{name:label_w$}");
        for (c, cell) in cells[r].iter().enumerate() {
            let _ = write!(line, "  {:>w$}", cell, w = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// A map of free complexes given degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMap {
    /// `maps[i]` sends source term `i` to target term `i`.
    pub maps: Vec<MonomialMatrix>,
}

/// `ι_ω : F_Δ -> F_{Δ'}` for an lcm-labeled subdivision `Δ'` of `Δ`
/// at the vertex `vp` inside `omega`. Faces not containing `ω` map to
/// themselves; a face `σ ⊇ ω` maps to the signed sum over `u ∈ ω` of
/// `ℓ(σ)/ℓ'(τ ∪ v') [τ ∪ v']` with `τ = σ \ u`.
pub fn subdivision_chain_map(
    l: &LabeledComplex,
    sub: &LabeledComplex,
    omega: Face,
    vp: usize,
) -> Result<ChainMap> {
    l.require_lcm("the subdivision chain map")?;
    sub.require_lcm("the subdivision chain map")?;
    let k = l.complex();
    let ks = sub.complex();
    let old = k.universe();
    if ks.universe().len() <= vp
        || ks.universe()[..old.len()] != old[..]
        || vp < old.len()
    {
        return Err(Error::invalid(
            "the subdivided complex must extend the original vertex list",
        ));
    }
    if !k.contains(omega) || omega.len() < 2 {
        return Err(Error::invalid("ω must be a face of dimension at least one"));
    }
    let cone = Face::singleton(vp);
    let lvp = sub.label(cone).ok_or_else(|| Error::invalid("the new vertex is missing"))?;
    let lw = l.label(omega).expect("checked");
    if !lvp.divides_unchecked(lw) {
        return Err(Error::invalid(
            "the new label does not divide the label of ω, so ι_ω has non-monomial entries",
        ));
    }
    let f = build_complex(l);
    let fs = build_complex(sub);
    let mut maps = Vec::with_capacity(f.len());
    for i in 0..f.len() {
        let cols = f.terms[i].len();
        let rows = fs.terms.get(i).map_or(0, Vec::len);
        let mut columns = Vec::with_capacity(cols);
        for g in &f.terms[i] {
            let sigma = g.face;
            let mut col = Vec::new();
            if !omega.is_subset_of(sigma) {
                let row = ks
                    .index_in_dim(sigma)
                    .ok_or_else(|| Error::invalid("subdivision lost a face outside ω"))?;
                col.push(Entry {
                    row,
                    sign: 1,
                    coeff: g
                        .degree
                        .quotient_unchecked(&fs.terms[i][row].degree)
                        .ok_or_else(|| Error::invalid("labels disagree off ω"))?,
                });
            } else {
                for (j, u) in sigma.vertices().enumerate() {
                    if !omega.contains(u) {
                        continue;
                    }
                    let target = sigma.minus(Face::singleton(u)).union(cone);
                    let row = ks
                        .index_in_dim(target)
                        .ok_or_else(|| Error::invalid("subdivision is missing a cone face"))?;
                    let p = target.position(vp).expect("cone vertex");
                    let sign = if (j + p) % 2 == 0 { 1 } else { -1 };
                    col.push(Entry {
                        row,
                        sign,
                        coeff: g
                            .degree
                            .quotient_unchecked(&fs.terms[i][row].degree)
                            .ok_or_else(|| Error::invalid("cone label does not divide"))?,
                    });
                }
            }
            col.sort_by_key(|e| e.row);
            columns.push(col);
        }
        maps.push(MonomialMatrix { rows, cols, columns });
    }
    Ok(ChainMap { maps })
}

impl ChainMap {
    /// `∂' ∘ ι = ι ∘ ∂` in every degree, exactly.
    pub fn commutes(&self, source: &FreeChainComplex, target: &FreeChainComplex) -> bool {
        (1..source.len()).all(|i| {
            let d = &source.differentials[i - 1];
            let dt = target.differential(i);
            (0..d.cols).all(|c| {
                let mut lhs: BTreeMap<usize, Polynomial> = BTreeMap::new();
                if let Some(dt) = dt {
                    for e in &self.maps[i].columns[c] {
                        for f in &dt.columns[e.row] {
                            add_term(
                                lhs.entry(f.row).or_default(),
                                e.coeff.mul(&f.coeff).expect("same ring"),
                                e.sign as i64 * f.sign as i64,
                            );
                        }
                    }
                }
                let mut rhs: BTreeMap<usize, Polynomial> = BTreeMap::new();
                for e in &d.columns[c] {
                    for f in &self.maps[i - 1].columns[e.row] {
                        add_term(
                            rhs.entry(f.row).or_default(),
                            e.coeff.mul(&f.coeff).expect("same ring"),
                            e.sign as i64 * f.sign as i64,
                        );
                    }
                }
                lhs.retain(|_, p| !p.is_empty());
                rhs.retain(|_, p| !p.is_empty());
                lhs == rhs
            })
        })
    }

    /// Certifies full column rank of every degree by evaluating the entries
    /// at points of `GF(p)^n`: a nonzero maximal minor at one point proves
    /// the minor is a nonzero polynomial.
    pub fn full_column_rank(&self, nvars: usize) -> bool {
        const P: u64 = 32003;
        let a = &PrimeField(P);
        let mut points: Vec<Vec<u64>> = vec![vec![1; nvars]];
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        for _ in 0..4 {
            points.push(
                (0..nvars)
                    .map(|_| {
                        state = state
                            .wrapping_mul(6_364_136_223_846_793_005)
                            .wrapping_add(1_442_695_040_888_963_407);
                        1 + (state >> 33) % (P - 1)
                    })
                    .collect(),
            );
        }
        self.maps.iter().all(|m| {
            m.cols == 0
                || points.iter().any(|pt| {
                    let mut dense = vec![vec![0i64; m.cols]; m.rows];
                    for (c, col) in m.columns.iter().enumerate() {
                        for e in col {
                            let mut v = 1u64;
                            for (x, &ex) in pt.iter().zip(e.coeff.exponents()) {
                                for _ in 0..ex {
                                    v = v * x % P;
                                }
                            }
                            dense[e.row][c] = if e.sign < 0 { (P - v) as i64 } else { v as i64 };
                        }
                    }
                    rank(a, &dense, m.cols) == m.cols
                })
        })
    }

    /// The map on degree-`α` strands, as sign matrices between the strand
    /// bases of `source` and `target`.
    pub fn strand(
        &self,
        source: &FreeChainComplex,
        target: &FreeChainComplex,
        alpha: &Monomial,
    ) -> Vec<Vec<Vec<i64>>> {
        let pick = |f: &FreeChainComplex, i: usize| -> Vec<usize> {
            f.terms
                .get(i)
                .map(|t| {
                    t.iter()
                        .enumerate()
                        .filter(|(_, g)| g.degree.divides_unchecked(alpha))
                        .map(|(j, _)| j)
                        .collect()
                })
                .unwrap_or_default()
        };
        (0..self.maps.len())
            .map(|i| self.maps[i].restrict_signs(&pick(target, i), &pick(source, i)))
            .collect()
    }
}
