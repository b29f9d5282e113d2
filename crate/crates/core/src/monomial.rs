//! Monomials and monomial ideals in the finely graded ring `k[x_1, ..., x_n]`,
//! together with the Cox-ring data of a toric variety.
//!
//! All values are immutable once built. Ideals are kept in canonical form:
//! the generator list is the unique minimal generating set, sorted by total
//! degree and then by exponent vector, so structural equality is ideal
//! equality.

use std::cmp::{Ordering, Reverse};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest exponent the engine will produce. Inputs that would push an
/// intermediate exponent past this are rejected.
pub const MAX_EXPONENT: u32 = i32::MAX as u32;

type Exponents = SmallVec<[u32; 8]>;

/// A monomial `x^alpha`, stored as its exponent vector. The exponent vector
/// doubles as the fine degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial {
    exps: Exponents,
}

/// Fine degrees and monomials are the same data.
pub type FineDegree = Monomial;

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if let Some(&e) = exponents.iter().find(|&&e| e > MAX_EXPONENT) {
            return Err(Error::invalid(format!("exponent {e} exceeds {MAX_EXPONENT}")));
        }
        Ok(Monomial {
            exps: Exponents::from_vec(exponents),
        })
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
        }
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[index] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_square_free(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    /// Indices of the variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    fn check_len(&self, other: &Monomial) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check_len(other)?;
        Ok(self.lcm_unchecked(other))
    }

    pub fn gcd(&self, other: &Monomial) -> Result<Monomial> {
        self.check_len(other)?;
        Ok(self.gcd_unchecked(other))
    }

    /// True iff `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_len(other)?;
        let mut exps = Exponents::with_capacity(self.nvars());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            match a.checked_add(b) {
                Some(s) if s <= MAX_EXPONENT => exps.push(s),
                _ => return Err(Error::invalid("exponent overflow in product")),
            }
        }
        Ok(Monomial { exps })
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn quotient(&self, other: &Monomial) -> Result<Option<Monomial>> {
        self.check_len(other)?;
        Ok(self.quotient_unchecked(other))
    }

    pub fn pow(&self, d: u32) -> Result<Monomial> {
        let mut exps = Exponents::with_capacity(self.nvars());
        for &e in &self.exps {
            match e.checked_mul(d) {
                Some(p) if p <= MAX_EXPONENT => exps.push(p),
                _ => return Err(Error::invalid("exponent overflow in power")),
            }
        }
        Ok(Monomial { exps })
    }

    /// Sets the exponent of every variable in the support of `mask` to zero.
    pub fn zero_out(&self, mask: &Monomial) -> Result<Monomial> {
        self.check_len(mask)?;
        Ok(self.zero_out_unchecked(mask))
    }

    /// Applies a variable permutation: variable `i` is sent to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Monomial> {
        if perm.len() != self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                found: perm.len(),
            });
        }
        let mut exps: Exponents = smallvec::smallvec![0; self.nvars()];
        for (i, &target) in perm.iter().enumerate() {
            if target >= self.nvars() {
                return Err(Error::invalid("permutation index out of range"));
            }
            exps[target] = self.exps[i];
        }
        Ok(Monomial { exps })
    }

    pub(crate) fn lcm_unchecked(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub(crate) fn gcd_unchecked(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        }
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    pub(crate) fn quotient_unchecked(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = Exponents::with_capacity(self.nvars());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(b)?);
        }
        Some(Monomial { exps })
    }

    pub(crate) fn zero_out_unchecked(&self, mask: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&mask.exps)
                .map(|(&a, &m)| if m > 0 { 0 } else { a })
                .collect(),
        }
    }

    pub(crate) fn lcm_in_place(&mut self, other: &Monomial) {
        for (a, &b) in self.exps.iter_mut().zip(&other.exps) {
            *a = (*a).max(b);
        }
    }

    fn canonical_key(&self) -> (u64, Reverse<&[u32]>) {
        (self.degree(), Reverse(&self.exps[..]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded order: total degree first, then the exponent vector with earlier
/// variables weighing more (`x0 < x1` as generators, since `x0` sorts first).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

/// A monomial ideal, stored by its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let gens: Vec<Monomial> = generators.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::Dimension {
                expected: nvars,
                found: g.nvars(),
            });
        }
        Ok(Self::from_unchecked(nvars, gens))
    }

    pub(crate) fn from_unchecked(nvars: usize, mut gens: Vec<Monomial>) -> Self {
        gens.sort();
        gens.dedup();
        let mut minimal: Vec<Monomial> = Vec::with_capacity(gens.len());
        // Sorted by degree, so a divisor always precedes its multiples.
        for g in gens {
            if !minimal.iter().any(|h| h.divides_unchecked(&g)) {
                minimal.push(g);
            }
        }
        MonomialIdeal {
            nvars,
            gens: minimal,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![Monomial::one(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    /// A monomial ideal is prime iff it is generated by variables (the zero
    /// ideal counts as prime, the unit ideal does not).
    pub fn is_prime(&self) -> bool {
        self.gens.iter().all(|g| g.degree() == 1)
    }

    pub fn is_square_free(&self) -> bool {
        self.gens.iter().all(Monomial::is_square_free)
    }

    fn check_nvars(&self, n: usize) -> Result<()> {
        if n != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        self.check_nvars(m.nvars())?;
        Ok(self.contains_unchecked(m))
    }

    pub(crate) fn contains_unchecked(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides_unchecked(m))
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check_nvars(other.nvars)?;
        Ok(other.gens.iter().all(|g| self.contains_unchecked(g)))
    }

    /// `self + <m>`.
    pub fn with_generator(&self, m: &Monomial) -> Result<MonomialIdeal> {
        self.check_nvars(m.nvars())?;
        let mut gens = self.gens.clone();
        gens.push(m.clone());
        Ok(Self::from_unchecked(self.nvars, gens))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_nvars(other.nvars)?;
        let gens = self.gens.iter().chain(&other.gens).cloned().collect();
        Ok(Self::from_unchecked(self.nvars, gens))
    }

    /// `I : <b>`, generated by `g / gcd(g, b)`.
    pub fn colon(&self, b: &Monomial) -> Result<MonomialIdeal> {
        self.check_nvars(b.nvars())?;
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let common = g.gcd_unchecked(b);
                g.quotient_unchecked(&common)
                    .expect("gcd divides its argument")
            })
            .collect();
        Ok(Self::from_unchecked(self.nvars, gens))
    }

    /// Intersection via pairwise lcms of generators.
    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_nvars(other.nvars)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm_unchecked(b));
            }
        }
        Ok(Self::from_unchecked(self.nvars, gens))
    }

    /// `I : B`, the intersection of `I : b` over the generators of `B`.
    pub fn colon_ideal(&self, b: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_nvars(b.nvars)?;
        let mut acc: Option<MonomialIdeal> = None;
        for g in &b.gens {
            let part = self.colon(g)?;
            acc = Some(match acc {
                None => part,
                Some(prev) => prev.intersect(&part)?,
            });
        }
        // `I : 0` is the whole ring.
        Ok(acc.unwrap_or_else(|| Self::unit(self.nvars)))
    }

    /// `I : B^infinity`, computed as the stable value of `I -> I : B`.
    pub fn saturate(&self, b: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_nvars(b.nvars)?;
        let mut current = self.clone();
        loop {
            let next = current.colon_ideal(b)?;
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// True iff `f` lies in `I : B^infinity`.
    pub fn saturation_contains(&self, f: &Monomial, b: &MonomialIdeal) -> Result<bool> {
        self.saturate(b)?.contains(f)
    }

    /// Codimension of the ideal: the smallest number of variables meeting
    /// the support of every generator. The zero ideal has codimension 0;
    /// the unit ideal is assigned codimension `nvars` by convention.
    pub fn codimension(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        if self.is_unit() {
            return self.nvars;
        }
        let supports: Vec<u64> = self
            .gens
            .iter()
            .map(|g| g.support().fold(0u64, |acc, v| acc | (1 << v)))
            .collect();
        let n = self.nvars;
        assert!(n < 64, "codimension search supports at most 63 variables");
        (1..=n)
            .find(|&size| {
                subsets_of_size(n, size).any(|cover| supports.iter().all(|s| s & cover != 0))
            })
            .unwrap_or(n)
    }

    /// The bracket power `<g^d : g a minimal generator>`.
    pub fn bracket_power(&self, d: i64) -> Result<MonomialIdeal> {
        if d < 0 {
            return Err(Error::invalid(format!("bracket power exponent {d} is negative")));
        }
        let d = u32::try_from(d).map_err(|_| Error::invalid("bracket power exponent too large"))?;
        let gens = self
            .gens
            .iter()
            .map(|g| g.pow(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_unchecked(self.nvars, gens))
    }
}

/// Bitmasks over `n` elements with exactly `size` bits set, in increasing order.
fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut next = if size == 0 { 0 } else { (1u64 << size) - 1 };
    let mut done = size > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = next;
        if size == 0 {
            done = true;
        } else {
            // Gosper's hack.
            let c = current & current.wrapping_neg();
            let r = current + c;
            next = (((r ^ current) >> 2) / c) | r;
            if next >= limit {
                done = true;
            }
        }
        Some(current)
    })
}

/// Partition of the variables of a product of two projective spaces.
/// `x` is the larger block, so `x.len() >= y.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBlocks {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

/// Cox-ring data: variable names, the square-free irrelevant ideal, and an
/// optional Picard grading used only for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricContext {
    names: Vec<String>,
    irrelevant: MonomialIdeal,
    picard: Option<Vec<Vec<i64>>>,
}

impl ToricContext {
    pub fn new(
        names: Vec<String>,
        irrelevant: MonomialIdeal,
        picard: Option<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        if irrelevant.nvars() != names.len() {
            return Err(Error::Dimension {
                expected: names.len(),
                found: irrelevant.nvars(),
            });
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::parse(name.clone(), "variable names must be identifiers"));
            }
            if names[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate variable name `{name}`")));
            }
        }
        if !irrelevant.is_square_free() {
            return Err(Error::invalid("irrelevant ideal must be square-free"));
        }
        if let Some(rows) = &picard {
            if rows.iter().any(|r| r.len() != names.len()) {
                return Err(Error::invalid(format!(
                    "picard grading rows must have {} columns",
                    names.len()
                )));
            }
        }
        Ok(ToricContext {
            names,
            irrelevant,
            picard,
        })
    }

    /// Cox ring of `P^n x P^k`: variables `x0..xn, y0..yk`, irrelevant ideal
    /// `<x0..xn> ∩ <y0..yk>` expanded to the generators `x_i y_j`, and the
    /// standard `Z^2` grading.
    pub fn product_of_projective(n: usize, k: usize) -> Self {
        let names: Vec<String> = (0..=n)
            .map(|i| format!("x{i}"))
            .chain((0..=k).map(|j| format!("y{j}")))
            .collect();
        let nvars = names.len();
        let mut gens = Vec::new();
        for i in 0..=n {
            for j in 0..=k {
                let mut e = vec![0; nvars];
                e[i] = 1;
                e[n + 1 + j] = 1;
                gens.push(Monomial::new(e).expect("small exponents"));
            }
        }
        let picard = vec![
            (0..nvars).map(|v| i64::from(v <= n)).collect(),
            (0..nvars).map(|v| i64::from(v > n)).collect(),
        ];
        ToricContext {
            names,
            irrelevant: MonomialIdeal::from_unchecked(nvars, gens),
            picard: Some(picard),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    pub fn irrelevant(&self) -> &MonomialIdeal {
        &self.irrelevant
    }

    pub fn picard_grading(&self) -> Option<&[Vec<i64>]> {
        self.picard.as_deref()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Image of a fine degree under the Picard grading, if one is attached.
    pub fn picard_degree(&self, m: &Monomial) -> Option<Vec<i64>> {
        let rows = self.picard.as_ref()?;
        Some(
            rows.iter()
                .map(|row| {
                    row.iter()
                        .zip(m.exponents())
                        .map(|(&w, &e)| w * i64::from(e))
                        .sum()
                })
                .collect(),
        )
    }

    /// Recognizes `B = <x_i y_j>` for a bipartition of all variables into
    /// two blocks, i.e. the Cox data of a product of two projective spaces.
    pub fn product_blocks(&self) -> Option<ProductBlocks> {
        let gens = self.irrelevant.generators();
        if gens.is_empty() || gens.iter().any(|g| g.degree() != 2) {
            return None;
        }
        let n = self.nvars();
        let first: Vec<usize> = gens[0].support().collect();
        let (a, b) = (first[0], first[1]);
        let partner = |v: usize| -> Vec<usize> {
            let mut out: Vec<usize> = gens
                .iter()
                .filter(|g| g.exponent(v) == 1)
                .flat_map(|g| g.support().filter(move |&u| u != v).collect::<Vec<_>>())
                .collect();
            out.sort_unstable();
            out
        };
        let block_b = partner(a);
        let block_a = partner(b);
        if block_a.len() + block_b.len() != n || gens.len() != block_a.len() * block_b.len() {
            return None;
        }
        for &u in &block_a {
            if partner(u) != block_b {
                return None;
            }
        }
        for &u in &block_b {
            if partner(u) != block_a {
                return None;
            }
        }
        // Keep the variable order of `x` before `y` when the sizes tie.
        let (x, y) = if block_a.len() > block_b.len()
            || (block_a.len() == block_b.len() && block_a[0] < block_b[0])
        {
            (block_a, block_b)
        } else {
            (block_b, block_a)
        };
        Some(ProductBlocks { x, y })
    }

    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::parse(text, "empty monomial"));
        }
        let mut exps = vec![0u32; self.nvars()];
        if trimmed == "1" {
            return Monomial::new(exps);
        }
        for factor in trimmed.split('*') {
            let factor = factor.trim();
            let (name, power) = match factor.split_once('^') {
                Some((name, p)) => {
                    let p: u32 = p
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(factor, "exponent must be a non-negative integer"))?;
                    (name.trim(), p)
                }
                None => (factor, 1),
            };
            if name == "1" {
                continue;
            }
            let var = self
                .variable_index(name)
                .ok_or_else(|| Error::parse(factor, "unknown variable"))?;
            exps[var] = exps[var]
                .checked_add(power)
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::parse(factor, "exponent too large"))?;
        }
        Monomial::new(exps)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.names[i].clone()
                } else {
                    format!("{}^{}", self.names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn render_ideal(&self, ideal: &MonomialIdeal) -> String {
        let gens: Vec<String> = ideal
            .generators()
            .iter()
            .map(|g| self.render_monomial(g))
            .collect();
        format!("<{}>", gens.join(", "))
    }

    pub fn display<'a>(&'a self, m: &'a Monomial) -> impl fmt::Display + 'a {
        struct D<'a>(&'a ToricContext, &'a Monomial);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render_monomial(self.1))
            }
        }
        D(self, m)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}
