//! Exact linear algebra over a field and reduced simplicial homology.
//!
//! Every routine is generic over [`Arith`] and dispatched once on the
//! configured [`Field`]. Matrices are dense; the complexes in scope have
//! at most a few hundred faces.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labeled::LabeledComplex;
use crate::monomial::Monomial;
use crate::simplicial::{Face, SimplicialComplex};

pub const DEFAULT_PRIME: u32 = 32003;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if !(2..1 << 31).contains(&p) || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::invalid(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    /// Accepts `rational`, `QQ`, `prime` (the default prime), `prime:p`,
    /// `GF(p)`, or a bare prime.
    pub fn parse(text: &str) -> Result<Field> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        if lower == "rational" || lower == "qq" || lower == "q" {
            return Ok(Field::Rational);
        }
        if lower == "prime" {
            return Ok(Field::Prime(DEFAULT_PRIME));
        }
        let digits = lower
            .strip_prefix("prime:")
            .or_else(|| lower.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')))
            .unwrap_or(&lower);
        let p: u32 = digits
            .trim()
            .parse()
            .map_err(|_| Error::parse(t, "expected `rational`, `prime`, `prime:p` or `GF(p)`"))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// A field element in either supported field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u32, p: u32 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    /// The value as an integer when it is one; prime field elements use
    /// the representative of least absolute value.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => i64::try_from(q.to_integer()).ok(),
            Scalar::Rational(_) => None,
            Scalar::Prime { value, p } => {
                let (v, p) = (*value as i64, *p as i64);
                Some(if v > p / 2 { v - p } else { v })
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime { .. } => write!(f, "{}", self.as_i64().expect("prime scalars are integral")),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) trait Arith {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn from_i64(&self, v: i64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn scalar(&self, a: &Self::E) -> Scalar;
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.mul(a, &self.inv(b))
    }
}

pub(crate) struct Rationals;

impl Arith for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
}

pub(crate) struct PrimeField(pub u64);

impl Arith for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2).
        let (mut base, mut exp, mut acc) = (*a % self.0, self.0 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn scalar(&self, a: &u64) -> Scalar {
        Scalar::Prime {
            value: *a as u32,
            p: self.0 as u32,
        }
    }
}

macro_rules! dispatch {
    ($field:expr, $a:ident => $body:expr) => {
        match $field {
            Field::Rational => {
                let $a = &Rationals;
                $body
            }
            Field::Prime(p) => {
                let $a = &PrimeField(p as u64);
                $body
            }
        }
    };
}
pub(crate) use dispatch;

/// Incrementally built row-echelon basis. Each stored row carries a tag
/// recording how it was expressed in terms of tagged insertions.
pub(crate) struct Echelon<'a, A: Arith> {
    a: &'a A,
    width: usize,
    tags: usize,
    rows: Vec<(usize, Vec<A::E>, Vec<A::E>)>,
}

impl<'a, A: Arith> Echelon<'a, A> {
    pub fn new(a: &'a A, width: usize, tags: usize) -> Self {
        Echelon {
            a,
            width,
            tags,
            rows: Vec::new(),
        }
    }

    /// Reduces `v` against the basis, returning the residual and the tag
    /// combination of the rows subtracted.
    fn reduce(&self, mut v: Vec<A::E>) -> (Vec<A::E>, Vec<A::E>) {
        let a = self.a;
        let mut coords = vec![a.zero(); self.tags];
        for (pivot, row, tag) in &self.rows {
            if a.is_zero(&v[*pivot]) {
                continue;
            }
            let factor = a.div(&v[*pivot], &row[*pivot]);
            for (x, r) in v.iter_mut().zip(row) {
                if !a.is_zero(r) {
                    *x = a.sub(x, &a.mul(&factor, r));
                }
            }
            for (c, t) in coords.iter_mut().zip(tag) {
                if !a.is_zero(t) {
                    *c = a.add(c, &a.mul(&factor, t));
                }
            }
        }
        (v, coords)
    }

    /// Inserts `v` with the given tag; returns whether it was independent.
    pub fn insert(&mut self, v: Vec<A::E>, tag: Option<usize>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let (residual, coords) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !self.a.is_zero(x)) else {
            return false;
        };
        let a = self.a;
        let mut own = vec![a.zero(); self.tags];
        if let Some(t) = tag {
            own[t] = a.from_i64(1);
        }
        let own: Vec<A::E> = own.iter().zip(&coords).map(|(o, c)| a.sub(o, c)).collect();
        self.rows.push((pivot, residual, own));
        true
    }

    pub fn contains(&self, v: Vec<A::E>) -> bool {
        self.reduce(v).0.iter().all(|x| self.a.is_zero(x))
    }

    /// Coordinates of `v` on the tagged insertions, provided `v` lies in
    /// the span.
    pub fn coordinates(&self, v: Vec<A::E>) -> Option<Vec<A::E>> {
        let (residual, coords) = self.reduce(v);
        residual.iter().all(|x| self.a.is_zero(x)).then_some(coords)
    }
}

/// Reduced row-echelon form; returns the pivot columns.
pub(crate) fn rref<A: Arith>(a: &A, m: &mut [Vec<A::E>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !a.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = a.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = a.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i != r && !a.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..ncols {
                    if !a.is_zero(&m[r][j]) {
                        let d = a.mul(&factor, &m[r][j]);
                        m[i][j] = a.sub(&m[i][j], &d);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn to_field<A: Arith>(a: &A, m: &[Vec<i64>]) -> Vec<Vec<A::E>> {
    m.iter()
        .map(|row| row.iter().map(|&x| a.from_i64(x)).collect())
        .collect()
}

pub(crate) fn rank<A: Arith>(a: &A, m: &[Vec<i64>], ncols: usize) -> usize {
    if m.is_empty() || ncols == 0 {
        return 0;
    }
    let mut work = to_field(a, m);
    rref(a, &mut work, ncols).len()
}

/// Basis of the null space, one vector per free column of the RREF with a
/// `1` in that column.
pub(crate) fn kernel<A: Arith>(a: &A, m: &[Vec<i64>], ncols: usize) -> Vec<Vec<A::E>> {
    let mut work = to_field(a, m);
    let pivots = if work.is_empty() {
        Vec::new()
    } else {
        rref(a, &mut work, ncols)
    };
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![a.zero(); ncols];
            v[free] = a.from_i64(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = a.sub(&a.zero(), &work[r][free]);
            }
            v
        })
        .collect()
}

/// A chain complex of finite-dimensional vector spaces with integer
/// matrices. Slot `d` has basis `bases[d]`; `maps[d]` sends slot `d` to
/// slot `d - 1` (rows index the target). `maps[0]` is the zero map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldComplex {
    pub bases: Vec<Vec<Face>>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

impl FieldComplex {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    fn map_rank<A: Arith>(&self, a: &A, d: usize) -> usize {
        if d == 0 || d >= self.len() {
            return 0;
        }
        rank(a, &self.maps[d], self.bases[d].len())
    }

    /// `dim H_d` for every slot.
    pub fn homology_dims(&self, field: Field) -> Vec<usize> {
        dispatch!(field, a => {
            let ranks: Vec<usize> = (0..=self.len()).map(|d| self.map_rank(a, d)).collect();
            (0..self.len())
                .map(|d| self.bases[d].len() - ranks[d] - ranks[d + 1])
                .collect()
        })
    }

    pub(crate) fn homology_with<A: Arith>(&self, a: &A, d: usize) -> Vec<Vec<A::E>> {
        let n = self.bases[d].len();
        let cycles = if d == 0 {
            (0..n)
                .map(|i| {
                    let mut v = vec![a.zero(); n];
                    v[i] = a.from_i64(1);
                    v
                })
                .collect()
        } else {
            kernel(a, &self.maps[d], n)
        };
        let mut ech = self.boundaries(a, d, 0);
        cycles
            .into_iter()
            .filter(|z| ech.insert(z.clone(), None))
            .collect()
    }

    pub(crate) fn boundaries<'a, A: Arith>(&self, a: &'a A, d: usize, tags: usize) -> Echelon<'a, A> {
        let n = self.bases[d].len();
        let mut ech = Echelon::new(a, n, tags);
        if d + 1 < self.len() {
            let m = &self.maps[d + 1];
            for c in 0..self.bases[d + 1].len() {
                ech.insert((0..n).map(|r| a.from_i64(m[r][c])).collect(), None);
            }
        }
        ech
    }

    pub(crate) fn is_cycle_with<A: Arith>(&self, a: &A, d: usize, v: &[A::E]) -> bool {
        if d == 0 {
            return true;
        }
        let m = &self.maps[d];
        (0..self.bases[d - 1].len()).all(|r| {
            let mut acc = a.zero();
            for (c, x) in v.iter().enumerate() {
                if m[r][c] != 0 && !a.is_zero(x) {
                    acc = a.add(&acc, &a.mul(&a.from_i64(m[r][c]), x));
                }
            }
            a.is_zero(&acc)
        })
    }

    /// Homology representatives in slot `d`, independent modulo boundaries.
    pub fn homology_representatives(&self, field: Field, d: usize) -> Vec<Cycle> {
        dispatch!(field, a => {
            self.homology_with(a, d)
                .iter()
                .map(|v| Cycle::from_vector(a, &self.bases[d], v))
                .collect()
        })
    }
}

/// The augmented chain complex of `K`: slot `d` holds the faces of
/// dimension `d - 1`, so slot 0 is spanned by `∅` when `K` is not void.
pub fn augmented_chain_complex(k: &SimplicialComplex) -> FieldComplex {
    let top = if k.is_void() { 0 } else { (k.dim() + 2) as usize };
    let bases: Vec<Vec<Face>> = (0..top).map(|d| k.faces(d as isize - 1).to_vec()).collect();
    let mut maps = vec![Vec::new()];
    for d in 1..top {
        let mut m = vec![vec![0i64; bases[d - 1].len()]; bases[d].len()];
        for (c, &f) in bases[d].iter().enumerate() {
            for (sign, _, t) in f.boundary() {
                let r = k.index_in_dim(t).expect("complex is closed");
                m[c][r] = sign;
            }
        }
        maps.push(transpose(&m, bases[d - 1].len()));
    }
    FieldComplex { bases, maps }
}

pub(crate) fn transpose(m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    (0..ncols)
        .map(|c| m.iter().map(|row| row[c]).collect())
        .collect()
}

/// A chain, listed by its nonzero face coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub terms: Vec<(Face, Scalar)>,
}

impl Cycle {
    fn from_vector<A: Arith>(a: &A, basis: &[Face], v: &[A::E]) -> Cycle {
        Cycle {
            terms: basis
                .iter()
                .zip(v)
                .filter(|(_, x)| !a.is_zero(x))
                .map(|(&f, x)| (f, a.scalar(x)))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn to_vector<A: Arith>(&self, a: &A, basis: &[Face]) -> Result<Vec<A::E>> {
        let mut v = vec![a.zero(); basis.len()];
        for (f, s) in &self.terms {
            let i = basis
                .iter()
                .position(|b| b == f)
                .ok_or_else(|| Error::invalid("chain is supported outside the basis"))?;
            v[i] = scalar_into(a, s)?;
        }
        Ok(v)
    }

    /// Renders the chain as e.g. `-[w0] + [w1]`.
    pub fn render(&self, k: &SimplicialComplex) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (f, s)) in self.terms.iter().enumerate() {
            let names = k.face_names(*f).join(",");
            let (neg, mag) = match s.as_i64() {
                Some(v) => (v < 0, v.unsigned_abs().to_string()),
                None => match s {
                    Scalar::Rational(q) => (q.is_negative(), q.abs().to_string()),
                    Scalar::Prime { .. } => unreachable!(),
                },
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push('[');
            out.push_str(&names);
            out.push(']');
        }
        out
    }
}

fn scalar_into<A: Arith>(a: &A, s: &Scalar) -> Result<A::E> {
    let probe = a.scalar(&a.zero());
    match (s, probe) {
        (Scalar::Rational(q), Scalar::Rational(_)) => {
            let num = a.from_i64(i64::try_from(q.numer()).map_err(|_| Error::invalid("coefficient too large"))?);
            let den = a.from_i64(i64::try_from(q.denom()).map_err(|_| Error::invalid("coefficient too large"))?);
            Ok(a.div(&num, &den))
        }
        (Scalar::Prime { value, p }, Scalar::Prime { p: q, .. }) if *p == q => {
            Ok(a.from_i64(*value as i64))
        }
        _ => Err(Error::invalid("coefficient belongs to a different field")),
    }
}

/// One reduced homology group `H̃_index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub index: isize,
    pub dim: usize,
    pub representatives: Vec<Cycle>,
}

/// Reduced homology of a complex for `index = -1 ..= dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedHomology {
    pub field: Field,
    pub groups: Vec<HomologyGroup>,
}

impl ReducedHomology {
    pub fn dim(&self, index: isize) -> usize {
        self.groups
            .iter()
            .find(|g| g.index == index)
            .map_or(0, |g| g.dim)
    }

    /// Vanishing of `H̃_j` for all `j >= 0`.
    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(|g| g.index < 0 || g.dim == 0)
    }
}

pub fn reduced_homology(k: &SimplicialComplex, field: Field) -> ReducedHomology {
    let fc = augmented_chain_complex(k);
    let dims = fc.homology_dims(field);
    let groups = (0..fc.len())
        .map(|d| HomologyGroup {
            index: d as isize - 1,
            dim: dims[d],
            representatives: fc.homology_representatives(field, d),
        })
        .collect();
    ReducedHomology { field, groups }
}

/// `dim H̃_j` at position `j + 1`; empty for the void complex.
pub fn reduced_betti(k: &SimplicialComplex, field: Field) -> Vec<usize> {
    augmented_chain_complex(k).homology_dims(field)
}

/// `H̃_j(K) = 0` for all `j >= 0`. Both `{∅}` and the void complex qualify.
pub fn is_acyclic(k: &SimplicialComplex, field: Field) -> bool {
    reduced_betti(k, field).iter().skip(1).all(|&b| b == 0)
}

/// Memoized reduced Betti numbers of induced subcomplexes of one complex.
pub struct HomologyCache {
    complex: SimplicialComplex,
    field: Field,
    betti: HashMap<u64, Vec<usize>>,
}

impl HomologyCache {
    pub fn new(complex: SimplicialComplex, field: Field) -> Self {
        HomologyCache {
            complex,
            field,
            betti: HashMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn serves(&self, k: &SimplicialComplex) -> bool {
        self.complex.ptr_eq(k) || self.complex == *k
    }

    /// Reduced Betti numbers of the subcomplex induced on `mask`.
    pub fn betti(&mut self, mask: u64) -> &[usize] {
        let complex = &self.complex;
        let field = self.field;
        self.betti
            .entry(mask)
            .or_insert_with(|| reduced_betti(&complex.induced(mask), field))
    }

    pub fn acyclic(&mut self, mask: u64) -> bool {
        self.betti(mask).iter().skip(1).all(|&b| b == 0)
    }
}

/// One nonzero entry `H_index(F_Δ)_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    pub index: usize,
    pub degree: Monomial,
    pub dim: usize,
    pub representatives: Vec<Cycle>,
}

/// Nonzero homology of `F_Δ`, one entry per homological index and
/// canonical attainable degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub field: Field,
    pub entries: Vec<HomologyEntry>,
}

impl HomologyReport {
    pub fn higher(&self) -> impl Iterator<Item = &HomologyEntry> {
        self.entries.iter().filter(|e| e.index >= 1)
    }

    pub fn dim_at(&self, index: usize, degree: &Monomial) -> usize {
        self.entries
            .iter()
            .find(|e| e.index == index && &e.degree == degree)
            .map_or(0, |e| e.dim)
    }
}

/// `H_i(F_Δ)_α ≅ H̃_{i-1}(Δ_m)` over all attainable `Δ_m`. `H_0` entries
/// (strands where `Δ_m = {∅}`) appear only when `include_h0` is set.
pub fn homology_table(l: &LabeledComplex, field: Field, include_h0: bool) -> HomologyReport {
    let mut entries = Vec::new();
    for att in l.attainable_subcomplexes(None).expect("floor is unset") {
        let h = reduced_homology(&att.complex, field);
        for g in h.groups {
            if g.dim == 0 || (g.index < 0 && !include_h0) {
                continue;
            }
            entries.push(HomologyEntry {
                index: (g.index + 1) as usize,
                degree: att.witness.clone(),
                dim: g.dim,
                representatives: g.representatives,
            });
        }
    }
    entries.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.degree.cmp(&b.degree)));
    HomologyReport { field, entries }
}

/// Map induced on `H̃_j` by an inclusion, in the representative bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMap {
    /// Rows index `H̃_j(Δ)`, columns index `H̃_j(Γ)`.
    pub matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
}

pub fn induced_map_on_homology(
    gamma: &SimplicialComplex,
    delta: &SimplicialComplex,
    j: isize,
    field: Field,
) -> Result<InducedMap> {
    if !gamma.is_subcomplex_of(delta) {
        return Err(Error::invalid("the source is not a subcomplex of the target"));
    }
    if j < -1 {
        return Err(Error::invalid("homological index must be at least -1"));
    }
    Ok(dispatch!(field, a => induced_map_with(a, gamma, delta, j)))
}

pub(crate) fn induced_map_with<A: Arith>(
    a: &A,
    gamma: &SimplicialComplex,
    delta: &SimplicialComplex,
    j: isize,
) -> InducedMap {
    let d = (j + 1) as usize;
    let gc = augmented_chain_complex(gamma);
    let dc = augmented_chain_complex(delta);
    let src: Vec<Vec<A::E>> = if d < gc.len() { gc.homology_with(a, d) } else { Vec::new() };
    let tgt: Vec<Vec<A::E>> = if d < dc.len() { dc.homology_with(a, d) } else { Vec::new() };
    let mut matrix = vec![vec![a.zero(); src.len()]; tgt.len()];
    if !src.is_empty() && !tgt.is_empty() {
        let mut tagged = dc.boundaries(a, d, tgt.len());
        for (t, z) in tgt.iter().enumerate() {
            tagged.insert(z.clone(), Some(t));
        }
        for (c, z) in src.iter().enumerate() {
            // Push the Γ-cycle into Δ's face basis.
            let mut v = vec![a.zero(); dc.bases[d].len()];
            for (x, f) in z.iter().zip(&gc.bases[d]) {
                let i = delta.index_in_dim(*f).expect("subcomplex face");
                v[i] = x.clone();
            }
            let coords = tagged.coordinates(v).expect("cycles lie in Z = B + span(reps)");
            for (r, x) in coords.into_iter().enumerate() {
                matrix[r][c] = x;
            }
        }
    }
    let rank = if matrix.is_empty() || src.is_empty() {
        0
    } else {
        let mut work = matrix.clone();
        rref(a, &mut work, src.len()).len()
    };
    InducedMap {
        rank,
        injective: rank == src.len(),
        surjective: rank == tgt.len(),
        matrix: matrix
            .iter()
            .map(|row| row.iter().map(|x| a.scalar(x)).collect())
            .collect(),
    }
}

/// Rank of the map induced on `H̃_j`, skipping the matrix.
pub fn induced_rank(
    gamma: &SimplicialComplex,
    delta: &SimplicialComplex,
    j: isize,
    field: Field,
) -> Result<usize> {
    induced_map_on_homology(gamma, delta, j, field).map(|m| m.rank)
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: ((a as u64 * b as u64) % p as u64) as u32,
                p,
            },
            _ => panic!("mixed fields"),
        }
    }
}
