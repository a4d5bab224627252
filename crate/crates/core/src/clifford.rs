//! Clifford-type algebras `Cl(α, βᵢ, γᵢ, λᵢⱼ)`: generators `G, X₁…Xₙ` with
//! `G² = α`, `Xᵢ² = βᵢ`, `GXᵢ + XᵢG = γᵢ`, `XᵢXⱼ + XⱼXᵢ = λᵢⱼ`.
//!
//! Basis monomials `GʲX_P` are indexed by `j·2ⁿ + mask(P)`, so all monomials
//! without `G` come first, each block ordered by the subset bitmask.
//! Internally generators are numbered `0 = G`, `i = Xᵢ` and a monomial is a
//! bitmask over those `n + 1` generators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{Field, FieldElement};

/// Largest supported number of `X` generators; the product table has
/// `4^(n+1)` entries.
pub const MAX_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraDescriptor {
    pub field: Field,
    pub n: usize,
    pub alpha: FieldElement,
    pub beta: Vec<FieldElement>,
    pub gamma: Vec<FieldElement>,
    /// Keys are 1-based pairs `(i, j)` with `i < j`; absent pairs are zero.
    pub lambda: BTreeMap<(usize, usize), FieldElement>,
}

impl AlgebraDescriptor {
    /// `Cl(α, β₁…βₙ)` with all anticommutators zero.
    pub fn orthogonal(field: &Field, alpha: FieldElement, beta: Vec<FieldElement>) -> Self {
        let n = beta.len();
        AlgebraDescriptor {
            field: field.clone(),
            n,
            alpha,
            beta,
            gamma: vec![field.zero(); n],
            lambda: BTreeMap::new(),
        }
    }

    /// Integer-parameter shorthand, mostly for tests.
    pub fn from_ints(
        field: &Field,
        alpha: i64,
        beta: &[i64],
        gamma: &[i64],
        lambda: &[(usize, usize, i64)],
    ) -> Self {
        AlgebraDescriptor {
            field: field.clone(),
            n: beta.len(),
            alpha: field.from_i64(alpha),
            beta: beta.iter().map(|&x| field.from_i64(x)).collect(),
            gamma: gamma.iter().map(|&x| field.from_i64(x)).collect(),
            lambda: lambda
                .iter()
                .map(|&(i, j, x)| ((i, j), field.from_i64(x)))
                .collect(),
        }
    }

    pub fn lambda(&self, i: usize, j: usize) -> FieldElement {
        let key = if i < j { (i, j) } else { (j, i) };
        self.lambda.get(&key).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn dim(&self) -> usize {
        1 << (self.n + 1)
    }
}

/// A basis label `GʲX_P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade {
    pub j: u8,
    /// Bit `i − 1` set iff `Xᵢ ∈ P`.
    pub p: u32,
}

impl Blade {
    pub fn from_index(idx: usize, n: usize) -> Blade {
        Blade {
            j: ((idx >> n) & 1) as u8,
            p: (idx & ((1 << n) - 1)) as u32,
        }
    }

    pub fn index(self, n: usize) -> usize {
        ((self.j as usize) << n) | self.p as usize
    }

    pub fn size(self) -> usize {
        self.p.count_ones() as usize
    }

    pub fn degree(self) -> usize {
        self.j as usize + self.size()
    }

    /// 1-based generator indices in `P`.
    pub fn subset(self) -> Vec<usize> {
        (0..32).filter(|b| self.p >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn parse(s: &str, n: usize) -> Result<Blade> {
        let bad = || Error::Parse(format!("bad basis label {s:?}"));
        let t = s.trim();
        if t == "1" {
            return Ok(Blade { j: 0, p: 0 });
        }
        let (j, rest) = match t.strip_prefix('g') {
            Some(r) => (1, r.trim_start()),
            None => (0, t),
        };
        let mut p = 0u32;
        if !rest.is_empty() {
            let inner = rest
                .strip_prefix("x{")
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(bad)?;
            for tok in inner.split(',') {
                let i: usize = tok.trim().parse().map_err(|_| bad())?;
                if i == 0 || i > n || p >> (i - 1) & 1 == 1 {
                    return Err(bad());
                }
                p |= 1 << (i - 1);
            }
        }
        Ok(Blade { j, p })
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs = self.subset();
        match (self.j, xs.is_empty()) {
            (0, true) => f.write_str("1"),
            (1, true) => f.write_str("g"),
            _ => {
                let list: Vec<String> = xs.iter().map(ToString::to_string).collect();
                let g = if self.j == 1 { "g " } else { "" };
                write!(f, "{g}x{{{}}}", list.join(","))
            }
        }
    }
}

#[derive(Clone)]
pub struct Algebra(Arc<Inner>);

struct Inner {
    desc: AlgebraDescriptor,
    dim: usize,
    /// `q(e_a)` for the generators `e_0 = G, e_i = Xᵢ`.
    square: Vec<FieldElement>,
    /// `e_a e_b + e_b e_a` for `a ≠ b`.
    anti: Vec<Vec<FieldElement>>,
    orthogonal: bool,
    table: Vec<Vec<(usize, FieldElement)>>,
}

fn index_of_mask(m: u32, n: usize) -> usize {
    (((m & 1) as usize) << n) | (m >> 1) as usize
}

fn mask_of_index(idx: usize, n: usize) -> u32 {
    (((idx >> n) & 1) | ((idx & ((1 << n) - 1)) << 1)) as u32
}

impl Algebra {
    pub fn new(desc: AlgebraDescriptor) -> Result<Algebra> {
        let n = desc.n;
        if n > MAX_N {
            return Err(Error::Unsupported(format!("n = {n} exceeds {MAX_N}")));
        }
        if desc.beta.len() != n {
            return Err(Error::Arity { what: "beta", expected: n, got: desc.beta.len() });
        }
        if desc.gamma.len() != n {
            return Err(Error::Arity { what: "gamma", expected: n, got: desc.gamma.len() });
        }
        for &(i, j) in desc.lambda.keys() {
            if i == 0 || i >= j || j > n {
                return Err(Error::BadIndex { i, j });
            }
        }
        let field = &desc.field;
        let scalars = std::iter::once(&desc.alpha)
            .chain(&desc.beta)
            .chain(&desc.gamma)
            .chain(desc.lambda.values());
        for x in scalars {
            if x.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        let mut square = vec![desc.alpha.clone()];
        square.extend(desc.beta.iter().cloned());
        let mut anti = vec![vec![field.zero(); n + 1]; n + 1];
        for i in 1..=n {
            anti[0][i] = desc.gamma[i - 1].clone();
            anti[i][0] = desc.gamma[i - 1].clone();
            for j in i + 1..=n {
                anti[i][j] = desc.lambda(i, j);
                anti[j][i] = desc.lambda(i, j);
            }
        }
        let orthogonal = anti.iter().flatten().all(FieldElement::is_zero);
        let dim = desc.dim();
        let mut inner = Inner {
            desc,
            dim,
            square,
            anti,
            orthogonal,
            table: Vec::new(),
        };
        let mut table = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                table.push(inner.monomial_product(mask_of_index(a, n), mask_of_index(b, n)));
            }
        }
        inner.table = table;
        Ok(Algebra(Arc::new(inner)))
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.0.desc
    }

    pub fn field(&self) -> &Field {
        &self.0.desc.field
    }

    pub fn n(&self) -> usize {
        self.0.desc.n
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn is_orthogonal(&self) -> bool {
        self.0.orthogonal
    }

    pub fn blade(&self, idx: usize) -> Blade {
        Blade::from_index(idx, self.n())
    }

    pub fn label(&self, idx: usize) -> String {
        self.blade(idx).to_string()
    }

    pub fn index_of(&self, blade: Blade) -> usize {
        blade.index(self.n())
    }

    /// Product of two basis monomials as `(index, coefficient)` terms.
    pub fn mul_basis(&self, a: usize, b: usize) -> &[(usize, FieldElement)] {
        &self.0.table[a * self.0.dim + b]
    }

    /// Matrix of `x ↦ a·x`.
    pub fn left_matrix(&self, a: &CliffordElement) -> Matrix {
        self.regular_matrix(a, true)
    }

    /// Matrix of `x ↦ x·a`.
    pub fn right_matrix(&self, a: &CliffordElement) -> Matrix {
        self.regular_matrix(a, false)
    }

    fn regular_matrix(&self, a: &CliffordElement, left: bool) -> Matrix {
        let dim = self.dim();
        let mut m = Matrix::zeros(self.field(), dim, dim);
        for (i, c) in a.terms() {
            for j in 0..dim {
                let (x, y) = if left { (i, j) } else { (j, i) };
                for (k, s) in self.mul_basis(x, y) {
                    *m.entry_mut(*k, j) += &(c * s);
                }
            }
        }
        m
    }

    /// A basis of the centre, in reduced echelon form (so `1` comes first).
    pub fn center(&self) -> Vec<CliffordElement> {
        let dim = self.dim();
        let mut stacked = Matrix::zeros(self.field(), dim * dim, dim);
        for b in 0..dim {
            for z in 0..dim {
                for (k, s) in self.mul_basis(z, b) {
                    *stacked.entry_mut(b * dim + k, z) += s;
                }
                for (k, s) in self.mul_basis(b, z) {
                    *stacked.entry_mut(b * dim + k, z) -= s;
                }
            }
        }
        let span = Subspace::span(self.field(), dim, &stacked.nullspace());
        span.basis()
            .iter()
            .map(|v| CliffordElement::from_coeffs(self, v.clone()))
            .collect()
    }

    /// Trace of left multiplication by `a`.
    pub fn regular_trace(&self, a: &CliffordElement) -> FieldElement {
        let mut t = self.field().zero();
        for (i, c) in a.terms() {
            for j in 0..self.dim() {
                for (k, s) in self.mul_basis(i, j) {
                    if *k == j {
                        t += &(c * s);
                    }
                }
            }
        }
        t
    }

    /// Matrix of the grade involution σ.
    pub fn sigma_matrix(&self) -> Matrix {
        let f = self.field();
        let mut m = Matrix::zeros(f, self.dim(), self.dim());
        for i in 0..self.dim() {
            let s = if self.blade(i).degree() % 2 == 0 { f.one() } else { -f.one() };
            m.set(i, i, s);
        }
        m
    }

    pub fn same(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0.desc;
        write!(f, "Cl[{:?}; n={}; α={}; β={:?}; γ={:?}; λ={:?}]", d.field, d.n, d.alpha, d.beta, d.gamma, d.lambda)
    }
}

impl Inner {
    fn zero(&self) -> FieldElement {
        self.desc.field.zero()
    }

    /// `m · e_g` for a sorted monomial `m`, as `(mask, coefficient)` terms.
    fn right_mul_gen(&self, m: u32, g: usize) -> Vec<(u32, FieldElement)> {
        let one = self.desc.field.one();
        if m == 0 {
            return vec![(1 << g, one)];
        }
        let h = 31 - m.leading_zeros() as usize;
        if h < g {
            return vec![(m | 1 << g, one)];
        }
        let rest = m ^ (1 << h);
        if h == g {
            return vec![(rest, self.square[g].clone())];
        }
        // e_h e_g = (e_h e_g + e_g e_h) − e_g e_h
        let mut out = Vec::new();
        if !self.anti[h][g].is_zero() {
            out.push((rest, self.anti[h][g].clone()));
        }
        for (mm, c) in self.right_mul_gen(rest, g) {
            out.push((mm | 1 << h, -c));
        }
        out
    }

    fn monomial_product(&self, a: u32, b: u32) -> Vec<(usize, FieldElement)> {
        let n = self.desc.n;
        if self.orthogonal {
            let mut sign = 0;
            let mut coeff = self.desc.field.one();
            for g in 0..=n {
                if b >> g & 1 == 1 {
                    sign += (a >> (g + 1)).count_ones();
                    if a >> g & 1 == 1 {
                        coeff *= &self.square[g];
                    }
                }
            }
            if coeff.is_zero() {
                return Vec::new();
            }
            let c = if sign % 2 == 1 { -coeff } else { coeff };
            return vec![(index_of_mask(a ^ b, n), c)];
        }
        let mut terms: BTreeMap<u32, FieldElement> = BTreeMap::from([(a, self.desc.field.one())]);
        for g in 0..=n {
            if b >> g & 1 == 0 {
                continue;
            }
            let mut next: BTreeMap<u32, FieldElement> = BTreeMap::new();
            for (m, c) in &terms {
                for (mm, s) in self.right_mul_gen(*m, g) {
                    let e = next.entry(mm).or_insert_with(|| self.zero());
                    *e += &(c * &s);
                }
            }
            next.retain(|_, c| !c.is_zero());
            terms = next;
        }
        terms.into_iter().map(|(m, c)| (index_of_mask(m, n), c)).collect()
    }
}

/// An element of a Clifford-type algebra, stored densely in basis order.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordElement {
    algebra: Algebra,
    coeffs: Vec<FieldElement>,
}

impl CliffordElement {
    pub fn zero(algebra: &Algebra) -> Self {
        CliffordElement {
            algebra: algebra.clone(),
            coeffs: vec![algebra.field().zero(); algebra.dim()],
        }
    }

    pub fn scalar(algebra: &Algebra, s: FieldElement) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[0] = s;
        e
    }

    pub fn one(algebra: &Algebra) -> Self {
        Self::scalar(algebra, algebra.field().one())
    }

    pub fn basis(algebra: &Algebra, idx: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[idx] = algebra.field().one();
        e
    }

    pub fn g(algebra: &Algebra) -> Self {
        Self::basis(algebra, 1 << algebra.n())
    }

    /// The generator `Xᵢ`, 1-based.
    pub fn x(algebra: &Algebra, i: usize) -> Self {
        assert!(i >= 1 && i <= algebra.n(), "generator index out of range");
        Self::basis(algebra, 1 << (i - 1))
    }

    pub fn from_coeffs(algebra: &Algebra, coeffs: Vec<FieldElement>) -> Self {
        assert_eq!(coeffs.len(), algebra.dim(), "coefficient vector length");
        CliffordElement {
            algebra: algebra.clone(),
            coeffs,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> &FieldElement {
        &self.coeffs[idx]
    }

    /// Nonzero `(index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &FieldElement)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// The scalar `s` when `self = s·1`.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        self.coeffs[1..]
            .iter()
            .all(FieldElement::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        CliffordElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if !self.algebra.same(&other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let alg = &self.algebra;
        let mut out = vec![alg.field().zero(); alg.dim()];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                let ab = a * b;
                for (k, s) in alg.mul_basis(i, j) {
                    out[*k] += &(&ab * s);
                }
            }
        }
        Ok(CliffordElement::from_coeffs(alg, out))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = CliffordElement::one(&self.algebra);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// σ: negate the odd-degree monomials.
    pub fn grade_involution(&self) -> Self {
        let alg = &self.algebra;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if alg.blade(i).degree() % 2 == 0 { c.clone() } else { -c })
            .collect();
        CliffordElement::from_coeffs(alg, coeffs)
    }

    pub fn even_odd_split(&self) -> (Self, Self) {
        let alg = &self.algebra;
        let zero = alg.field().zero();
        let part = |even: bool| {
            let coeffs = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if (alg.blade(i).degree() % 2 == 0) == even {
                        c.clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect();
            CliffordElement::from_coeffs(alg, coeffs)
        };
        (part(true), part(false))
    }

    /// Two-sided inverse, found from `a·x = 1` in the regular representation.
    pub fn try_invert(&self) -> Result<Self> {
        let alg = &self.algebra;
        let one = CliffordElement::one(alg);
        let x = alg
            .left_matrix(self)
            .solve(&one.coeffs)
            .ok_or(Error::NotInvertible)?;
        let x = CliffordElement::from_coeffs(alg, x);
        if &x * self != one {
            return Err(Error::Internal("right inverse is not a left inverse".into()));
        }
        Ok(x)
    }

    /// `{"g x{1,3}": "2/3", …}` with zero terms omitted.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.terms()
            .map(|(i, c)| (self.algebra.label(i), c.to_string()))
            .collect()
    }

    pub fn from_json_map(algebra: &Algebra, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut e = CliffordElement::zero(algebra);
        for (label, coeff) in map {
            let idx = algebra.index_of(Blade::parse(label, algebra.n())?);
            e.coeffs[idx] += &algebra.field().parse(coeff)?;
        }
        Ok(e)
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .map(|(i, c)| format!("{c}·{}", self.algebra.label(i)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Add<&CliffordElement> for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        assert!(self.algebra.same(&rhs.algebra), "mixed algebras");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CliffordElement::from_coeffs(&self.algebra, coeffs)
    }
}

impl Sub<&CliffordElement> for &CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: &CliffordElement) -> CliffordElement {
        assert!(self.algebra.same(&rhs.algebra), "mixed algebras");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CliffordElement::from_coeffs(&self.algebra, coeffs)
    }
}

impl Mul<&CliffordElement> for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        self.checked_mul(rhs).expect("mixed algebras")
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        CliffordElement::from_coeffs(&self.algebra, self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CliffordElement> for CliffordElement {
            type Output = CliffordElement;
            fn $m(self, rhs: CliffordElement) -> CliffordElement { (&self).$m(&rhs) }
        }
        impl $tr<&CliffordElement> for CliffordElement {
            type Output = CliffordElement;
            fn $m(self, rhs: &CliffordElement) -> CliffordElement { (&self).$m(rhs) }
        }
        impl $tr<CliffordElement> for &CliffordElement {
            type Output = CliffordElement;
            fn $m(self, rhs: CliffordElement) -> CliffordElement { self.$m(&rhs) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        -&self
    }
}
