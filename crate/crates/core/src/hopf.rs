//! The Hopf algebras `E(n)`: the algebra `Cl(1, 0, …, 0)` with
//! `Δ(g) = g⊗g`, `Δ(xᵢ) = xᵢ⊗g + 1⊗xᵢ`, its dual, and the isomorphism
//! `φ: E(n)^cop → E(n)*`.
//!
//! Basis labels and indices are shared with [`crate::clifford`], with `g` and
//! `xᵢ` in the roles of `G` and `Xᵢ`.

use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::{Algebra, AlgebraDescriptor, Blade, CliffordElement};
use crate::error::{Error, Result};
use crate::exec::{find_first, Exec};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalars::{Field, FieldElement};
use crate::tensor::{Tensor, TensorElement};

/// `S(F, P) = (j₁ + … + j_r) − r(r+1)/2` where `j_k` are the 1-based
/// positions of the elements of `F` inside the sorted set `P`.
pub fn sign_s(f: &[usize], p: &[usize]) -> Result<i64> {
    let mut total = 0i64;
    for &x in f {
        let pos = p
            .iter()
            .position(|&y| y == x)
            .ok_or_else(|| Error::NotSubset(f.to_vec(), p.to_vec()))?;
        total += pos as i64 + 1;
    }
    let r = f.len() as i64;
    Ok(total - r * (r + 1) / 2)
}

/// Parity of `S(F, P)` on bitmasks, `F ⊆ P`.
fn sign_s_odd(f: u32, p: u32) -> bool {
    let mut total = 0u32;
    let mut r = 0u32;
    for b in 0..32 {
        if f >> b & 1 == 1 {
            // position of b inside P, 1-based
            total += (p & ((2u32 << b) - 1)).count_ones();
            r += 1;
        }
    }
    (total - r * (r + 1) / 2) % 2 == 1
}

fn floor_half_sign(k: usize) -> bool {
    (k / 2) % 2 == 1
}

#[derive(Clone)]
pub struct EnHopf {
    algebra: Algebra,
}

/// Linear functional on `E(n)`, `Σ c_b·b*` over the basis.
#[derive(Clone, PartialEq, Eq)]
pub struct DualElement {
    coeffs: Vec<FieldElement>,
}

impl DualElement {
    pub fn zero(field: &Field, dim: usize) -> Self {
        DualElement {
            coeffs: vec![field.zero(); dim],
        }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        DualElement { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn eval_basis(&self, idx: usize) -> &FieldElement {
        &self.coeffs[idx]
    }

    pub fn eval(&self, h: &CliffordElement) -> FieldElement {
        let mut s = self.coeffs[0].field().zero();
        for (i, c) in h.terms() {
            s += &(c * &self.coeffs[i]);
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        DualElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        DualElement {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// `{"(g x{1})*": coeff}` with zero terms omitted.
    pub fn to_json_map(&self, n: usize) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (format!("({})*", Blade::from_index(i, n)), c.to_string()))
            .collect()
    }
}

impl fmt::Debug for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// The pieces of a Hopf structure on a Clifford-type algebra, given on basis
/// elements. [`verify_hopf_structure`] checks the axioms for any
/// implementation, which makes fault injection easy.
pub trait HopfData: Sync {
    fn algebra(&self) -> &Algebra;
    fn comul_basis(&self, idx: usize) -> TensorElement;
    fn counit_basis(&self, idx: usize) -> FieldElement;
    fn antipode_basis(&self, idx: usize) -> CliffordElement;
}

impl EnHopf {
    pub fn new(field: &Field, n: usize) -> Result<EnHopf> {
        let desc = AlgebraDescriptor::orthogonal(field, field.one(), vec![field.zero(); n]);
        Ok(EnHopf {
            algebra: Algebra::new(desc)?,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn n(&self) -> usize {
        self.algebra.n()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn index(&self, j: usize, p: u32) -> usize {
        Blade { j: (j % 2) as u8, p }.index(self.n())
    }

    /// `Δ(gʲx_P) = Σ_{F⊆P} (−1)^{S(F,P)} gʲx_F ⊗ g^{|F|+j} x_{P∖F}`.
    pub fn comul_basis(&self, idx: usize) -> TensorElement {
        let b = self.algebra.blade(idx);
        let f = self.field();
        let j = b.j as usize;
        let mut t = Tensor::zero(f);
        let mut sub = b.p;
        loop {
            let sign = if sign_s_odd(sub, b.p) { -f.one() } else { f.one() };
            let left = self.index(j, sub);
            let right = self.index(sub.count_ones() as usize + j, b.p & !sub);
            t.add_term([left, right], &sign);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & b.p;
        }
        t
    }

    pub fn comul(&self, h: &CliffordElement) -> TensorElement {
        let mut t = Tensor::zero(self.field());
        for (i, c) in h.terms() {
            t.add_scaled(&self.comul_basis(i), c);
        }
        t
    }

    pub fn comul_cop(&self, h: &CliffordElement) -> TensorElement {
        self.comul(h).flip()
    }

    /// `ε(gʲx_P) = [P = ∅]`.
    pub fn counit_basis(&self, idx: usize) -> FieldElement {
        if self.algebra.blade(idx).p == 0 {
            self.field().one()
        } else {
            self.field().zero()
        }
    }

    pub fn counit(&self, h: &CliffordElement) -> FieldElement {
        let mut s = self.field().zero();
        for (i, c) in h.terms() {
            s += &(c * &self.counit_basis(i));
        }
        s
    }

    /// The counit as a dual element, `1* + g*`.
    pub fn counit_dual(&self) -> DualElement {
        DualElement::from_coeffs((0..self.dim()).map(|i| self.counit_basis(i)).collect())
    }

    /// `S(gʲx_P) = (−1)^{j|P|} g^{j+|P|} x_P`.
    pub fn antipode_basis(&self, idx: usize) -> CliffordElement {
        let b = self.algebra.blade(idx);
        let size = b.size();
        let out = CliffordElement::basis(&self.algebra, self.index(b.j as usize + size, b.p));
        if (b.j as usize * size) % 2 == 1 {
            -out
        } else {
            out
        }
    }

    pub fn antipode(&self, h: &CliffordElement) -> CliffordElement {
        h.terms().fold(CliffordElement::zero(&self.algebra), |acc, (i, c)| {
            &acc + &self.antipode_basis(i).scale(c)
        })
    }

    /// `(f ⋆ h)(b) = Σ f(b₁) h(b₂)`.
    pub fn convolve(&self, f: &DualElement, h: &DualElement) -> DualElement {
        let coeffs = (0..self.dim())
            .map(|b| {
                let mut s = self.field().zero();
                for ([x, y], c) in self.comul_basis(b).terms() {
                    s += &(&(c * f.eval_basis(*x)) * h.eval_basis(*y));
                }
                s
            })
            .collect();
        DualElement::from_coeffs(coeffs)
    }

    /// `φ(gʲx_P) = (−1)^{⌊(|P|+1)/2⌋}(x_P)* + (−1)^{⌊|P|/2⌋+j}(gx_P)*`.
    pub fn phi_basis(&self, idx: usize) -> DualElement {
        let b = self.algebra.blade(idx);
        let size = b.size();
        let f = self.field();
        let sign = |neg: bool| if neg { -f.one() } else { f.one() };
        let mut d = DualElement::zero(f, self.dim());
        d.coeffs[self.index(0, b.p)] = sign(floor_half_sign(size + 1));
        d.coeffs[self.index(1, b.p)] = sign(floor_half_sign(size) ^ (b.j == 1));
        d
    }

    pub fn phi(&self, h: &CliffordElement) -> DualElement {
        h.terms().fold(DualElement::zero(self.field(), self.dim()), |acc, (i, c)| {
            acc.add(&self.phi_basis(i).scale(c))
        })
    }

    /// Closed-form inverse: `(x_P)* = ±φ((x_P + gx_P)/2)`,
    /// `(gx_P)* = ±φ((x_P − gx_P)/2)`.
    pub fn phi_inv_basis(&self, idx: usize) -> CliffordElement {
        let b = self.algebra.blade(idx);
        let size = b.size();
        let f = self.field();
        let half = f.from_ratio(1, 2).expect("odd characteristic");
        let x = CliffordElement::basis(&self.algebra, self.index(0, b.p));
        let gx = CliffordElement::basis(&self.algebra, self.index(1, b.p));
        let (sum, neg) = if b.j == 0 {
            (&x + &gx, floor_half_sign(size + 1))
        } else {
            (&x - &gx, floor_half_sign(size))
        };
        let s = if neg { -half } else { half };
        sum.scale(&s)
    }

    pub fn phi_inv(&self, f: &DualElement) -> CliffordElement {
        f.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(CliffordElement::zero(&self.algebra), |acc, (i, c)| {
                &acc + &self.phi_inv_basis(i).scale(c)
            })
    }
}

impl HopfData for EnHopf {
    fn algebra(&self) -> &Algebra {
        &self.algebra
    }
    fn comul_basis(&self, idx: usize) -> TensorElement {
        EnHopf::comul_basis(self, idx)
    }
    fn counit_basis(&self, idx: usize) -> FieldElement {
        EnHopf::counit_basis(self, idx)
    }
    fn antipode_basis(&self, idx: usize) -> CliffordElement {
        EnHopf::antipode_basis(self, idx)
    }
}

fn comul_of<H: HopfData + ?Sized>(h: &H, x: &CliffordElement) -> TensorElement {
    let mut t = Tensor::zero(x.algebra().field());
    for (i, c) in x.terms() {
        t.add_scaled(&h.comul_basis(i), c);
    }
    t
}

fn counit_of<H: HopfData + ?Sized>(h: &H, x: &CliffordElement) -> FieldElement {
    let mut s = x.algebra().field().zero();
    for (i, c) in x.terms() {
        s += &(c * &h.counit_basis(i));
    }
    s
}

/// Checks coassociativity, the counit laws, multiplicativity of `Δ` and `ε`,
/// and the antipode law on every basis element and pair.
pub fn verify_hopf_structure<H: HopfData>(h: &H, exec: Exec) -> Report {
    let alg = h.algebra();
    let f = alg.field();
    let dim = alg.dim();
    let label = |i: usize| alg.label(i);
    let mut report = Report::new();

    let coassoc = find_first(exec, dim, |b| {
        let delta = h.comul_basis(b);
        let mut left = Tensor::<3>::zero(f);
        let mut right = Tensor::<3>::zero(f);
        for ([x, y], c) in delta.terms() {
            for ([p, q], d) in h.comul_basis(*x).terms() {
                left.add_term([*p, *q, *y], &(c * d));
            }
            for ([p, q], d) in h.comul_basis(*y).terms() {
                right.add_term([*x, *p, *q], &(c * d));
            }
        }
        (left != right).then(|| vec![label(b)])
    });
    report.record("coassociativity", coassoc);

    let counit = find_first(exec, dim, |b| {
        let delta = h.comul_basis(b);
        let mut left = CliffordElement::zero(alg);
        let mut right = CliffordElement::zero(alg);
        for ([x, y], c) in delta.terms() {
            left = &left + &CliffordElement::basis(alg, *y).scale(&(c * &h.counit_basis(*x)));
            right = &right + &CliffordElement::basis(alg, *x).scale(&(c * &h.counit_basis(*y)));
        }
        let e = CliffordElement::basis(alg, b);
        (left != e || right != e).then(|| vec![label(b)])
    });
    report.record("counit", counit);

    let unit_ok = h.comul_basis(0) == Tensor::basis(f, [0, 0]) && h.counit_basis(0).is_one();
    report.record("unit", (!unit_ok).then(|| vec![label(0)]));

    let comul_mult = find_first(exec, dim * dim, |k| {
        let (a, b) = (k / dim, k % dim);
        let ab = CliffordElement::basis(alg, a) * CliffordElement::basis(alg, b);
        let lhs = comul_of(h, &ab);
        let rhs = h.comul_basis(a).mul(&h.comul_basis(b), [alg, alg]);
        (lhs != rhs).then(|| vec![label(a), label(b)])
    });
    report.record("comultiplication multiplicative", comul_mult);

    let counit_mult = find_first(exec, dim * dim, |k| {
        let (a, b) = (k / dim, k % dim);
        let ab = CliffordElement::basis(alg, a) * CliffordElement::basis(alg, b);
        let lhs = counit_of(h, &ab);
        let rhs = &h.counit_basis(a) * &h.counit_basis(b);
        (lhs != rhs).then(|| vec![label(a), label(b)])
    });
    report.record("counit multiplicative", counit_mult);

    let antipode = find_first(exec, dim, |b| {
        let delta = h.comul_basis(b);
        let mut left = CliffordElement::zero(alg);
        let mut right = CliffordElement::zero(alg);
        for ([x, y], c) in delta.terms() {
            let bx = CliffordElement::basis(alg, *x);
            let by = CliffordElement::basis(alg, *y);
            left = &left + &(h.antipode_basis(*x) * &by).scale(c);
            right = &right + &(bx * h.antipode_basis(*y)).scale(c);
        }
        let e = CliffordElement::scalar(alg, h.counit_basis(b));
        (left != e || right != e).then(|| vec![label(b)])
    });
    report.record("antipode", antipode);
    report
}

pub fn verify_hopf(field: &Field, n: usize) -> Result<Report> {
    Ok(verify_hopf_structure(&EnHopf::new(field, n)?, Exec::default()))
}

/// Checks that `map` (given on basis elements, extended linearly) is a Hopf
/// algebra isomorphism `E(n)^cop → E(n)*`: multiplicative for `⋆`, unital,
/// bijective, and compatible with `Δ^cop` on the source and the transpose of
/// multiplication on the target, tested against all basis pairs.
pub fn verify_duality_map<F>(en: &EnHopf, map: F, exec: Exec) -> Report
where
    F: Fn(usize) -> DualElement + Sync,
{
    let alg = en.algebra();
    let dim = en.dim();
    let label = |i: usize| alg.label(i);
    let images: Vec<DualElement> = (0..dim).map(&map).collect();
    let image_of = |x: &CliffordElement| {
        x.terms().fold(DualElement::zero(en.field(), dim), |acc, (i, c)| acc.add(&images[i].scale(c)))
    };
    let mut report = Report::new();

    let mult = find_first(exec, dim * dim, |k| {
        let (a, b) = (k / dim, k % dim);
        let ab = CliffordElement::basis(alg, a) * CliffordElement::basis(alg, b);
        (image_of(&ab) != en.convolve(&images[a], &images[b])).then(|| vec![label(a), label(b)])
    });
    report.record("multiplicative", mult);

    let unit_ok = images[0] == en.counit_dual();
    report.record("unital", (!unit_ok).then(|| vec![label(0)]));

    let pairing = Matrix::from_rows(
        en.field(),
        images.iter().map(|d| d.coeffs().to_vec()).collect(),
    )
    .expect("square pairing matrix");
    let bijective = !pairing.det().is_zero();
    report.record("bijective", (!bijective).then(Vec::new));

    // ⟨(φ⊗φ)Δ^cop(a), b⊗b′⟩ = Σ φ(a₂)(b)·φ(a₁)(b′) must equal φ(a)(b·b′)
    let cop = find_first(exec, dim * dim * dim, |k| {
        let (a, b, b2) = (k / (dim * dim), (k / dim) % dim, k % dim);
        let mut lhs = en.field().zero();
        for ([a1, a2], c) in en.comul_basis(a).terms() {
            lhs += &(&(c * images[*a2].eval_basis(b)) * images[*a1].eval_basis(b2));
        }
        let prod = CliffordElement::basis(alg, b) * CliffordElement::basis(alg, b2);
        let rhs = images[a].eval(&prod);
        (lhs != rhs).then(|| vec![label(a), label(b), label(b2)])
    });
    report.record("cop-coalgebra", cop);

    let counit = find_first(exec, dim, |a| {
        (images[a].eval_basis(0) != &en.counit_basis(a)).then(|| vec![label(a)])
    });
    report.record("counit", counit);
    report
}

pub fn verify_duality_iso(field: &Field, n: usize) -> Result<Report> {
    let en = EnHopf::new(field, n)?;
    let report = verify_duality_map(&en, |i| en.phi_basis(i), Exec::default());
    Ok(report)
}

/// The map `g ↦ 1* − g*`, `xᵢ ↦ xᵢ* + (gxᵢ)*`, extended multiplicatively
/// with `⋆`. It is a Hopf map out of `E(n)`, not out of `E(n)^cop`, so the
/// duality verifier must reject it.
pub fn psi_basis(en: &EnHopf, idx: usize) -> DualElement {
    let f = en.field();
    let n = en.n();
    let g_idx = Blade { j: 1, p: 0 }.index(n);
    let mut psi_g = DualElement::zero(f, en.dim());
    psi_g.coeffs[0] = f.one();
    psi_g.coeffs[g_idx] = -f.one();
    let psi_x = |i: usize| {
        let mut d = DualElement::zero(f, en.dim());
        d.coeffs[Blade { j: 0, p: 1 << (i - 1) }.index(n)] = f.one();
        d.coeffs[Blade { j: 1, p: 1 << (i - 1) }.index(n)] = f.one();
        d
    };
    let b = en.algebra().blade(idx);
    let mut acc = en.counit_dual();
    if b.j == 1 {
        acc = en.convolve(&acc, &psi_g);
    }
    for i in b.subset() {
        acc = en.convolve(&acc, &psi_x(i));
    }
    acc
}
