//! `E(n)`-coactions on a Clifford-type algebra `A` and the equivalent data:
//! `E(n)^cop`-actions and tuples `(φ, d₁…dₙ)` of an involution with
//! anticommuting square-zero φ-derivations.
//!
//! The correspondences are
//! * `V`: coaction → action, `μ(h⊗a) = φ(h)(a₁)·a₀`;
//! * `U`: action → coaction, `ρ(a) = Σᵢ μ(φ⁻¹(hᵢ*)⊗a) ⊗ hᵢ`;
//! * `Φ`: action → tuple, `φ = μ(g⊗·)`, `dᵢ = μ(xᵢ⊗·)`;
//! * `Ψ`: tuple → action, `μ(gʲx_P⊗a) = φʲ(d_{i₁}⋯d_{iₛ}(a))`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::{Algebra, Blade, CliffordElement};
use crate::error::{Error, Result};
use crate::exec::{find_first, Exec};
use crate::hopf::EnHopf;
use crate::linalg::{Matrix, Subspace};
use crate::report::Report;
use crate::scalars::FieldElement;
use crate::tensor::{Tensor, TensorElement};

/// A linear endomorphism of `A`; column `j` is the image of basis element `j`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearOperator {
    algebra: Algebra,
    matrix: Matrix,
}

impl LinearOperator {
    pub fn new(algebra: &Algebra, matrix: Matrix) -> Result<Self> {
        let d = algebra.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Dimension(format!(
                "operator must be {d}×{d}, got {}×{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.field() != algebra.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(LinearOperator {
            algebra: algebra.clone(),
            matrix,
        })
    }

    pub fn from_fn(algebra: &Algebra, f: impl Fn(usize) -> CliffordElement) -> Self {
        let columns: Vec<Vec<FieldElement>> =
            (0..algebra.dim()).map(|i| f(i).into_coeffs()).collect();
        LinearOperator {
            algebra: algebra.clone(),
            matrix: Matrix::from_columns(algebra.field(), algebra.dim(), &columns),
        }
    }

    pub fn identity(algebra: &Algebra) -> Self {
        LinearOperator {
            algebra: algebra.clone(),
            matrix: Matrix::identity(algebra.field(), algebra.dim()),
        }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        LinearOperator {
            algebra: algebra.clone(),
            matrix: Matrix::zeros(algebra.field(), algebra.dim(), algebra.dim()),
        }
    }

    /// The grade involution σ.
    pub fn sigma(algebra: &Algebra) -> Self {
        LinearOperator {
            algebra: algebra.clone(),
            matrix: algebra.sigma_matrix(),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &CliffordElement) -> CliffordElement {
        CliffordElement::from_coeffs(&self.algebra, self.matrix.mul_vec(a.coeffs()))
    }

    pub fn apply_basis(&self, idx: usize) -> CliffordElement {
        CliffordElement::from_coeffs(&self.algebra, self.matrix.column(idx))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        LinearOperator {
            algebra: self.algebra.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        LinearOperator {
            algebra: self.algebra.clone(),
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LinearOperator {
            algebra: self.algebra.clone(),
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

impl fmt::Debug for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

/// `(φ, d₁…dₙ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoactionTuple {
    pub phi: LinearOperator,
    pub ds: Vec<LinearOperator>,
}

impl CoactionTuple {
    pub fn trivial(algebra: &Algebra) -> Self {
        CoactionTuple {
            phi: LinearOperator::identity(algebra),
            ds: vec![LinearOperator::zero(algebra); algebra.n()],
        }
    }

    pub fn algebra(&self) -> &Algebra {
        self.phi.algebra()
    }

    /// `d_P(a) = d_{i₁}(d_{i₂}(⋯d_{iₛ}(a)))`, `d_∅ = Id`.
    pub fn d_p(&self, p: u32, a: &CliffordElement) -> CliffordElement {
        let mut out = a.clone();
        for b in (0..self.ds.len()).rev() {
            if p >> b & 1 == 1 {
                out = self.ds[b].apply(&out);
            }
        }
        out
    }

    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            phi: self.phi.matrix.to_strings(),
            d: self.ds.iter().map(|d| d.matrix.to_strings()).collect(),
        }
    }

    pub fn from_json(algebra: &Algebra, json: &TupleJson) -> Result<Self> {
        if json.d.len() != algebra.n() {
            return Err(Error::Arity {
                what: "d",
                expected: algebra.n(),
                got: json.d.len(),
            });
        }
        let op = |rows: &Vec<Vec<String>>| {
            LinearOperator::new(algebra, Matrix::from_strings(algebra.field(), rows)?)
        };
        Ok(CoactionTuple {
            phi: op(&json.phi)?,
            ds: json.d.iter().map(op).collect::<Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleJson {
    pub phi: Vec<Vec<String>>,
    pub d: Vec<Vec<Vec<String>>>,
}

/// A linear map `ρ: A → A⊗E(n)`, column `a` holding `ρ(a)` with row index
/// `a₀·dim E + h`.
#[derive(Clone)]
pub struct Coaction {
    algebra: Algebra,
    en: EnHopf,
    rho: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoactionJson {
    pub rho: BTreeMap<String, BTreeMap<String, String>>,
}

impl Coaction {
    pub fn from_images(algebra: &Algebra, images: &[TensorElement]) -> Result<Self> {
        let en = EnHopf::new(algebra.field(), algebra.n())?;
        let dims = [algebra.dim(), en.dim()];
        let columns: Vec<Vec<FieldElement>> = images.iter().map(|t| t.to_dense(dims)).collect();
        Ok(Coaction {
            rho: Matrix::from_columns(algebra.field(), dims[0] * dims[1], &columns),
            algebra: algebra.clone(),
            en,
        })
    }

    pub fn from_matrix(algebra: &Algebra, rho: Matrix) -> Result<Self> {
        let en = EnHopf::new(algebra.field(), algebra.n())?;
        if rho.rows() != algebra.dim() * en.dim() || rho.cols() != algebra.dim() {
            return Err(Error::Dimension("coaction matrix shape".into()));
        }
        Ok(Coaction {
            algebra: algebra.clone(),
            en,
            rho,
        })
    }

    /// `a ↦ a ⊗ 1`.
    pub fn trivial(algebra: &Algebra) -> Result<Self> {
        let f = algebra.field();
        let images: Vec<TensorElement> =
            (0..algebra.dim()).map(|i| Tensor::basis(f, [i, 0])).collect();
        Self::from_images(algebra, &images)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn en(&self) -> &EnHopf {
        &self.en
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rho
    }

    fn dims(&self) -> [usize; 2] {
        [self.algebra.dim(), self.en.dim()]
    }

    pub fn apply_basis(&self, idx: usize) -> TensorElement {
        Tensor::from_dense(self.algebra.field(), self.dims(), &self.rho.column(idx))
    }

    pub fn apply(&self, a: &CliffordElement) -> TensorElement {
        Tensor::from_dense(self.algebra.field(), self.dims(), &self.rho.mul_vec(a.coeffs()))
    }

    pub fn to_json(&self) -> CoactionJson {
        let rho = (0..self.algebra.dim())
            .map(|i| {
                let t = self.apply_basis(i).to_json_map(&self.algebra, self.en.algebra());
                (self.algebra.label(i), t)
            })
            .collect();
        CoactionJson { rho }
    }

    pub fn from_json(algebra: &Algebra, json: &CoactionJson) -> Result<Self> {
        let en = EnHopf::new(algebra.field(), algebra.n())?;
        let mut images = vec![Tensor::zero(algebra.field()); algebra.dim()];
        for (label, map) in &json.rho {
            let idx = algebra.index_of(Blade::parse(label, algebra.n())?);
            images[idx] = Tensor::from_json_map(algebra, en.algebra(), map)?;
        }
        Self::from_images(algebra, &images)
    }

    /// Hex SHA-256 of the canonical matrix rendering.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for row in self.rho.to_strings() {
            h.update(row.join(",").as_bytes());
            h.update(b";");
        }
        hex::encode(h.finalize())
    }
}

impl PartialEq for Coaction {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.rho == other.rho
    }
}

impl Eq for Coaction {}

impl fmt::Debug for Coaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries((0..self.algebra.dim()).map(|i| (self.algebra.label(i), self.apply_basis(i))))
            .finish()
    }
}

/// A linear map `μ: E(n)⊗A → A`, column `h·dim A + a` holding `μ(h⊗a)`.
#[derive(Clone)]
pub struct Action {
    algebra: Algebra,
    en: EnHopf,
    mu: Matrix,
}

impl Action {
    pub fn from_fn(algebra: &Algebra, f: impl Fn(usize, usize) -> CliffordElement) -> Result<Self> {
        let en = EnHopf::new(algebra.field(), algebra.n())?;
        let da = algebra.dim();
        let columns: Vec<Vec<FieldElement>> = (0..en.dim() * da)
            .map(|k| f(k / da, k % da).into_coeffs())
            .collect();
        Ok(Action {
            mu: Matrix::from_columns(algebra.field(), da, &columns),
            algebra: algebra.clone(),
            en,
        })
    }

    /// `μ(h⊗a) = ε(h)a`.
    pub fn trivial(algebra: &Algebra) -> Result<Self> {
        let en = EnHopf::new(algebra.field(), algebra.n())?;
        Self::from_fn(algebra, |h, a| {
            CliffordElement::basis(algebra, a).scale(&en.counit_basis(h))
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn en(&self) -> &EnHopf {
        &self.en
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mu
    }

    pub fn act_basis(&self, h: usize, a: usize) -> CliffordElement {
        CliffordElement::from_coeffs(&self.algebra, self.mu.column(h * self.algebra.dim() + a))
    }

    /// `μ(h⊗a)` for a basis element `h` of `E(n)`.
    pub fn act(&self, h: usize, a: &CliffordElement) -> CliffordElement {
        a.terms().fold(CliffordElement::zero(&self.algebra), |acc, (i, c)| {
            &acc + &self.act_basis(h, i).scale(c)
        })
    }

    /// `μ(h⊗a)` for an arbitrary `h ∈ E(n)`.
    pub fn act_element(&self, h: &CliffordElement, a: &CliffordElement) -> CliffordElement {
        h.terms().fold(CliffordElement::zero(&self.algebra), |acc, (i, c)| {
            &acc + &self.act(i, a).scale(c)
        })
    }
}

impl PartialEq for Action {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.mu == other.mu
    }
}

impl Eq for Action {}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Action{:?}", self.mu)
    }
}

fn pair(k: usize, dim: usize) -> (usize, usize) {
    (k / dim, k % dim)
}

pub fn verify_comodule_algebra(rho: &Coaction) -> Report {
    verify_comodule_algebra_with(rho, Exec::default())
}

/// Unit, counit, coassociativity and multiplicativity on all basis elements
/// and pairs.
pub fn verify_comodule_algebra_with(rho: &Coaction, exec: Exec) -> Report {
    let alg = &rho.algebra;
    let en = &rho.en;
    let f = alg.field();
    let dim = alg.dim();
    let label = |i: usize| alg.label(i);
    let mut report = Report::new();
    let images: Vec<TensorElement> = (0..dim).map(|i| rho.apply_basis(i)).collect();

    let unit_ok = images[0] == Tensor::basis(f, [0, 0]);
    report.record("unit", (!unit_ok).then(|| vec![label(0)]));

    let counit = find_first(exec, dim, |b| {
        let mut e = CliffordElement::zero(alg);
        for ([a, h], c) in images[b].terms() {
            e = &e + &CliffordElement::basis(alg, *a).scale(&(c * &en.counit_basis(*h)));
        }
        (e != CliffordElement::basis(alg, b)).then(|| vec![label(b)])
    });
    report.record("counit", counit);

    let coassoc = find_first(exec, dim, |b| {
        let mut left = Tensor::<3>::zero(f);
        let mut right = Tensor::<3>::zero(f);
        for ([a, h], c) in images[b].terms() {
            for ([a2, h2], d) in images[*a].terms() {
                left.add_term([*a2, *h2, *h], &(c * d));
            }
            for ([h1, h2], d) in en.comul_basis(*h).terms() {
                right.add_term([*a, *h1, *h2], &(c * d));
            }
        }
        (left != right).then(|| vec![label(b)])
    });
    report.record("coassociativity", coassoc);

    let mult = find_first(exec, dim * dim, |k| {
        let (a, b) = pair(k, dim);
        let ab = CliffordElement::basis(alg, a) * CliffordElement::basis(alg, b);
        let lhs = rho.apply(&ab);
        let rhs = images[a].mul(&images[b], [alg, en.algebra()]);
        (lhs != rhs).then(|| vec![label(a), label(b)])
    });
    report.record("multiplicativity", mult);
    report
}

pub fn verify_module_algebra(mu: &Action) -> Report {
    verify_module_algebra_with(mu, Exec::default())
}

/// Module axioms for `E(n)` acting on `A`, and the measuring axioms for the
/// coopposite comultiplication: `μ(h⊗ab) = Σ μ(h₂⊗a)·μ(h₁⊗b)`.
///
/// Both are checked for `h` a generator and every `h'`, `a`, `b`. The `h`
/// satisfying each axiom form a subalgebra (once the unit acts trivially and
/// `Δ` is multiplicative), so this covers all of `E(n)`.
pub fn verify_module_algebra_with(mu: &Action, exec: Exec) -> Report {
    let alg = &mu.algebra;
    let en = &mu.en;
    let ea = en.algebra();
    let da = alg.dim();
    let de = en.dim();
    let n = alg.n();
    let gens: Vec<usize> = std::iter::once(Blade { j: 1, p: 0 }.index(n))
        .chain((1..=n).map(|i| Blade { j: 0, p: 1 << (i - 1) }.index(n)))
        .collect();
    let ng = gens.len();
    let mut report = Report::new();

    let unit = find_first(exec, da, |a| {
        (mu.act_basis(0, a) != CliffordElement::basis(alg, a)).then(|| vec![alg.label(a)])
    });
    report.record("unit acts trivially", unit);

    let assoc = find_first(exec, ng * de * da, |k| {
        let (h2, h, a) = (gens[k / (de * da)], (k / da) % de, k % da);
        let lhs = mu.act(h2, &mu.act_basis(h, a));
        let prod = CliffordElement::basis(ea, h2) * CliffordElement::basis(ea, h);
        let rhs = mu.act_element(&prod, &CliffordElement::basis(alg, a));
        (lhs != rhs).then(|| vec![ea.label(h2), ea.label(h), alg.label(a)])
    });
    report.record("module associativity", assoc);

    let one_measure = find_first(exec, de, |h| {
        let lhs = mu.act_basis(h, 0);
        let rhs = CliffordElement::scalar(alg, en.counit_basis(h));
        (lhs != rhs).then(|| vec![ea.label(h)])
    });
    report.record("measuring unit", one_measure);

    let measure = find_first(exec, ng * da * da, |k| {
        let (h, a, b) = (gens[k / (da * da)], (k / da) % da, k % da);
        let ab = CliffordElement::basis(alg, a) * CliffordElement::basis(alg, b);
        let lhs = mu.act(h, &ab);
        let mut rhs = CliffordElement::zero(alg);
        for ([h1, h2], c) in en.comul_basis(h).terms() {
            rhs = &rhs + &(mu.act_basis(*h2, a) * mu.act_basis(*h1, b)).scale(c);
        }
        (lhs != rhs).then(|| vec![ea.label(h), alg.label(a), alg.label(b)])
    });
    report.record("measuring", measure);
    report
}

fn failure_text(report: &Report) -> String {
    match report.first_failure() {
        Some(c) => format!("{} fails at {:?}", c.axiom, c.witness.clone().unwrap_or_default()),
        None => "ok".into(),
    }
}

/// `U` without validating the input; linear in `μ`.
pub fn coaction_from_action_unchecked(mu: &Action) -> Coaction {
    let alg = &mu.algebra;
    let en = &mu.en;
    let f = alg.field();
    let preimages: Vec<CliffordElement> = (0..en.dim())
        .map(|i| {
            let mut star = crate::hopf::DualElement::zero(f, en.dim());
            let mut c = star.coeffs().to_vec();
            c[i] = f.one();
            star = crate::hopf::DualElement::from_coeffs(c);
            en.phi_inv(&star)
        })
        .collect();
    let images: Vec<TensorElement> = (0..alg.dim())
        .map(|a| {
            let a_el = CliffordElement::basis(alg, a);
            let mut t = Tensor::zero(f);
            for (h, pre) in preimages.iter().enumerate() {
                let m = mu.act_element(pre, &a_el);
                for (i, c) in m.terms() {
                    t.add_term([i, h], c);
                }
            }
            t
        })
        .collect();
    Coaction::from_images(alg, &images).expect("same algebra")
}

/// The functor `U`.
pub fn coaction_from_action(mu: &Action) -> Result<Coaction> {
    let r = verify_module_algebra(mu);
    if !r.passed {
        return Err(Error::InvalidAction(failure_text(&r)));
    }
    Ok(coaction_from_action_unchecked(mu))
}

/// `V` without validating the input.
pub fn action_from_coaction_unchecked(rho: &Coaction) -> Action {
    let alg = &rho.algebra;
    let en = &rho.en;
    let phis: Vec<_> = (0..en.dim()).map(|h| en.phi_basis(h)).collect();
    let images: Vec<TensorElement> = (0..alg.dim()).map(|a| rho.apply_basis(a)).collect();
    Action::from_fn(alg, |h, a| {
        let mut out = CliffordElement::zero(alg);
        for ([a0, a1], c) in images[a].terms() {
            let s = c * phis[h].eval_basis(*a1);
            if !s.is_zero() {
                out = &out + &CliffordElement::basis(alg, *a0).scale(&s);
            }
        }
        out
    })
    .expect("same algebra")
}

/// The functor `V`.
pub fn action_from_coaction(rho: &Coaction) -> Result<Action> {
    let r = verify_comodule_algebra(rho);
    if !r.passed {
        return Err(Error::InvalidCoaction(failure_text(&r)));
    }
    Ok(action_from_coaction_unchecked(rho))
}

/// `Φ`: read `φ` and the `dᵢ` off the action of `g` and the `xᵢ`.
pub fn tuple_from_action(mu: &Action) -> Result<CoactionTuple> {
    let r = verify_module_algebra(mu);
    if !r.passed {
        return Err(Error::InvalidAction(failure_text(&r)));
    }
    let t = tuple_from_action_unchecked(mu);
    let r = verify_tuple(&t);
    if !r.passed {
        return Err(Error::Internal(format!("extracted tuple: {}", failure_text(&r))));
    }
    Ok(t)
}

fn tuple_from_action_unchecked(mu: &Action) -> CoactionTuple {
    let alg = &mu.algebra;
    let n = alg.n();
    let g = Blade { j: 1, p: 0 }.index(n);
    CoactionTuple {
        phi: LinearOperator::from_fn(alg, |a| mu.act_basis(g, a)),
        ds: (1..=n)
            .map(|i| {
                let x = Blade { j: 0, p: 1 << (i - 1) }.index(n);
                LinearOperator::from_fn(alg, |a| mu.act_basis(x, a))
            })
            .collect(),
    }
}

/// `Ψ`: `μ(gʲx_P⊗a) = φʲ(d_P(a))`.
pub fn action_from_tuple(t: &CoactionTuple) -> Result<Action> {
    let r = verify_tuple(t);
    if !r.passed {
        return Err(Error::InvalidTuple(failure_text(&r)));
    }
    Ok(action_from_tuple_unchecked(t))
}

fn action_from_tuple_unchecked(t: &CoactionTuple) -> Action {
    let alg = t.algebra();
    Action::from_fn(alg, |h, a| {
        let b = alg.blade(h);
        let x = t.d_p(b.p, &CliffordElement::basis(alg, a));
        if b.j == 1 {
            t.phi.apply(&x)
        } else {
            x
        }
    })
    .expect("same algebra")
}

pub fn verify_tuple(t: &CoactionTuple) -> Report {
    verify_tuple_with(t, Exec::default())
}

pub fn verify_tuple_with(t: &CoactionTuple, exec: Exec) -> Report {
    let alg = t.algebra();
    let dim = alg.dim();
    let label = |i: usize| alg.label(i);
    let mut report = Report::new();
    if t.ds.len() != alg.n() || t.ds.iter().any(|d| d.algebra != *alg) {
        report.record("shape", Some(vec![format!("expected {} derivations", alg.n())]));
        return report;
    }
    let phi = &t.phi;
    let basis = |i| CliffordElement::basis(alg, i);

    let unital = phi.apply_basis(0) == CliffordElement::one(alg);
    report.record("phi unital", (!unital).then(|| vec![label(0)]));

    let mult = find_first(exec, dim * dim, |k| {
        let (a, b) = pair(k, dim);
        let lhs = phi.apply(&(basis(a) * basis(b)));
        (lhs != phi.apply_basis(a) * phi.apply_basis(b)).then(|| vec![label(a), label(b)])
    });
    report.record("phi multiplicative", mult);

    let inv = phi.compose(phi) == LinearOperator::identity(alg);
    report.record("phi involutive", (!inv).then(Vec::new));

    for (i, d) in t.ds.iter().enumerate() {
        let name = format!("d{}", i + 1);
        let deriv = find_first(exec, dim * dim, |k| {
            let (a, b) = pair(k, dim);
            let lhs = d.apply(&(basis(a) * basis(b)));
            let rhs = d.apply_basis(a) * basis(b) + phi.apply_basis(a) * d.apply_basis(b);
            (lhs != rhs).then(|| vec![name.clone(), label(a), label(b)])
        });
        report.record("skew-derivation", deriv);
        let sq = d.compose(d).is_zero();
        report.record("square zero", (!sq).then(|| vec![name.clone()]));
        let anti = phi.compose(d).add(&d.compose(phi)).is_zero();
        report.record("anticommutes with phi", (!anti).then(|| vec![name.clone()]));
    }
    for i in 0..t.ds.len() {
        for j in i + 1..t.ds.len() {
            let (di, dj) = (&t.ds[i], &t.ds[j]);
            let ok = di.compose(dj).add(&dj.compose(di)).is_zero();
            report.record(
                "derivations anticommute",
                (!ok).then(|| vec![format!("d{}", i + 1), format!("d{}", j + 1)]),
            );
        }
    }
    report
}

/// `ρ(a) = Σ_P (−1)^{⌊(|P|+1)/2⌋} [d_P(a) ⊗ (x_P + (−1)^{|P|} gx_P)/2
///                               + φ(d_P(a)) ⊗ (x_P + (−1)^{|P|+1} gx_P)/2]`,
/// cross-checked against `U(Ψ(t))`.
pub fn coaction_from_tuple(t: &CoactionTuple) -> Result<Coaction> {
    let r = verify_tuple(t);
    if !r.passed {
        return Err(Error::InvalidTuple(failure_text(&r)));
    }
    let rho = coaction_from_tuple_unchecked(t);
    let via_action = coaction_from_action_unchecked(&action_from_tuple_unchecked(t));
    if rho != via_action {
        return Err(Error::Internal("explicit coaction formula disagrees with U∘Ψ".into()));
    }
    Ok(rho)
}

fn coaction_from_tuple_unchecked(t: &CoactionTuple) -> Coaction {
    let alg = t.algebra();
    let n = alg.n();
    let f = alg.field();
    let half = f.from_ratio(1, 2).expect("odd characteristic");
    let images: Vec<TensorElement> = (0..alg.dim())
        .map(|a| {
            let a_el = CliffordElement::basis(alg, a);
            let mut out = Tensor::zero(f);
            for p in 0u32..(1 << n) {
                let size = p.count_ones() as usize;
                let outer = if (size + 1) / 2 % 2 == 1 { -half.clone() } else { half.clone() };
                let dp = t.d_p(p, &a_el);
                if dp.is_zero() {
                    continue;
                }
                let phidp = t.phi.apply(&dp);
                let x_p = Blade { j: 0, p }.index(n);
                let gx_p = Blade { j: 1, p }.index(n);
                let sign = |odd: bool| if odd { -f.one() } else { f.one() };
                // d_P(a) ⊗ (x_P + (−1)^{|P|} gx_P)
                for (i, c) in dp.terms() {
                    let c = c * &outer;
                    out.add_term([i, x_p], &c);
                    out.add_term([i, gx_p], &(&c * &sign(size % 2 == 1)));
                }
                // φ(d_P(a)) ⊗ (x_P + (−1)^{|P|+1} gx_P)
                for (i, c) in phidp.terms() {
                    let c = c * &outer;
                    out.add_term([i, x_p], &c);
                    out.add_term([i, gx_p], &(&c * &sign(size % 2 == 0)));
                }
            }
            out
        })
        .collect();
    Coaction::from_images(alg, &images).expect("same algebra")
}

/// Basis of `{a : ρ(a) = a⊗1}` from the nullspace of `ρ − (·⊗1)`, compared
/// against `ker(φ − Id) ∩ ⋂ ker dᵢ` for the tuple of `ρ`.
pub fn coinvariants(rho: &Coaction) -> Result<Vec<CliffordElement>> {
    let alg = &rho.algebra;
    let f = alg.field();
    let dim = alg.dim();
    let de = rho.en.dim();
    let mut m = rho.rho.clone();
    for a in 0..dim {
        let x = m.get(a * de, a) - &f.one();
        m.set(a * de, a, x);
    }
    let direct = Subspace::span(f, dim, &m.nullspace());

    let r = verify_comodule_algebra(rho);
    if !r.passed {
        return Err(Error::InvalidCoaction(failure_text(&r)));
    }
    let t = tuple_from_action_unchecked(&action_from_coaction_unchecked(rho));
    if !verify_tuple(&t).passed {
        return Err(Error::Internal("extracted tuple is invalid".into()));
    }
    let mut stacked = t.phi.sub(&LinearOperator::identity(alg)).matrix().clone();
    for d in &t.ds {
        stacked = stacked.vstack(d.matrix());
    }
    let via_tuple = Subspace::span(f, dim, &stacked.nullspace());
    if direct != via_tuple {
        return Err(Error::Internal("coinvariant computations disagree".into()));
    }
    Ok(direct
        .basis()
        .iter()
        .map(|v| CliffordElement::from_coeffs(alg, v.clone()))
        .collect())
}

/// `ρ(G) = G⊗g`, `ρ(Xᵢ) = Xᵢ⊗g + 1⊗xᵢ`, extended multiplicatively.
pub fn canonical_coaction(algebra: &Algebra) -> Result<Coaction> {
    let en = EnHopf::new(algebra.field(), algebra.n())?;
    let ea = en.algebra();
    let one = CliffordElement::one(algebra);
    let g = CliffordElement::g(ea);
    let rho_g = Tensor::pure(&CliffordElement::g(algebra), &g);
    let rho_x: Vec<TensorElement> = (1..=algebra.n())
        .map(|i| {
            let mut t = Tensor::pure(&CliffordElement::x(algebra, i), &g);
            t.add_scaled(&Tensor::pure(&one, &CliffordElement::x(ea, i)), &algebra.field().one());
            t
        })
        .collect();
    let images: Vec<TensorElement> = (0..algebra.dim())
        .map(|idx| {
            let b = algebra.blade(idx);
            let mut t = Tensor::basis(algebra.field(), [0, 0]);
            if b.j == 1 {
                t = t.mul(&rho_g, [algebra, ea]);
            }
            for i in b.subset() {
                t = t.mul(&rho_x[i - 1], [algebra, ea]);
            }
            t
        })
        .collect();
    Coaction::from_images(algebra, &images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::AlgebraDescriptor;
    use crate::scalars::Field;

    fn alg(alpha: i64, beta: &[i64], gamma: &[i64]) -> Algebra {
        Algebra::new(AlgebraDescriptor::from_ints(&Field::rational(), alpha, beta, gamma, &[])).unwrap()
    }

    fn label_el(a: &Algebra, s: &str) -> CliffordElement {
        CliffordElement::basis(a, a.index_of(Blade::parse(s, a.n()).unwrap()))
    }

    #[test]
    fn trivial_coaction_and_action() {
        let a = alg(1, &[1], &[0]);
        let rho = Coaction::trivial(&a).unwrap();
        assert!(verify_comodule_algebra(&rho).passed);
        let mu = action_from_coaction(&rho).unwrap();
        assert_eq!(mu, Action::trivial(&a).unwrap());
        assert_eq!(coaction_from_action(&mu).unwrap(), rho);
        assert_eq!(tuple_from_action(&mu).unwrap(), CoactionTuple::trivial(&a));
        assert_eq!(coinvariants(&rho).unwrap().len(), a.dim());
    }

    #[test]
    fn canonical_generators() {
        let a = alg(2, &[3], &[1]);
        let rho = canonical_coaction(&a).unwrap();
        let en = rho.en().clone();
        let e = |s| label_el(en.algebra(), s);
        let x = |s| label_el(&a, s);
        assert_eq!(rho.apply(&x("g")), Tensor::pure(&x("g"), &e("g")));
        let mut want = Tensor::pure(&x("g x{1}"), &e("1"));
        want.add_scaled(&Tensor::pure(&x("g"), &e("g x{1}")), &a.field().one());
        assert_eq!(rho.apply(&x("g x{1}")), want);
        assert_eq!(rho.apply(&x("1")), Tensor::pure(&x("1"), &e("1")));
        assert!(verify_comodule_algebra(&rho).passed);
    }

    #[test]
    fn dropping_a_term_breaks_multiplicativity() {
        let a = alg(1, &[1], &[0]);
        let rho = canonical_coaction(&a).unwrap();
        let en = rho.en().clone();
        let mut images: Vec<TensorElement> = (0..a.dim()).map(|i| rho.apply_basis(i)).collect();
        let x1 = a.index_of(Blade { j: 0, p: 1 });
        images[x1] = Tensor::pure(&label_el(&a, "x{1}"), &label_el(en.algebra(), "g"));
        let bad = Coaction::from_images(&a, &images).unwrap();
        let r = verify_comodule_algebra(&bad);
        assert!(!r.check("multiplicativity").unwrap().passed);
    }

    #[test]
    fn canonical_action_and_tuple() {
        let a = alg(1, &[1], &[0]);
        let mu = action_from_coaction(&canonical_coaction(&a).unwrap()).unwrap();
        let g_idx = Blade { j: 1, p: 0 }.index(1);
        let big_g = label_el(&a, "g");
        assert_eq!(mu.act(g_idx, &big_g), -&big_g);
        let t = tuple_from_action(&mu).unwrap();
        assert_eq!(t.phi, LinearOperator::sigma(&a));
        // with these conventions the canonical derivation sends X to −1
        let one = CliffordElement::one(&a);
        assert_eq!(t.ds[0].apply(&label_el(&a, "x{1}")), -&one);
        assert!(t.ds[0].apply(&big_g).is_zero());
        assert!(verify_module_algebra(&mu).passed);
    }

    #[test]
    fn sigma_tuple_gives_halves() {
        let a = alg(1, &[1], &[0]);
        let t = CoactionTuple {
            phi: LinearOperator::sigma(&a),
            ds: vec![LinearOperator::zero(&a)],
        };
        let rho = coaction_from_tuple(&t).unwrap();
        let en = rho.en().clone();
        let f = a.field();
        let half = f.from_ratio(1, 2).unwrap();
        let one_e = CliffordElement::one(en.algebra());
        let g_e = CliffordElement::g(en.algebra());
        for i in 0..a.dim() {
            let x = CliffordElement::basis(&a, i);
            let mut want = Tensor::pure(&x, &(&one_e + &g_e).scale(&half));
            want.add_scaled(&Tensor::pure(&x.grade_involution(), &(&one_e - &g_e).scale(&half)), &f.one());
            assert_eq!(rho.apply_basis(i), want);
        }
        let even: Vec<_> = coinvariants(&rho).unwrap();
        assert_eq!(even.len(), 2);
        assert!(even.iter().all(|e| e.grade_involution() == *e));
    }

    #[test]
    fn broken_tuples_rejected() {
        let a = alg(1, &[1], &[0]);
        let f = a.field();
        // d(G) = 1 and zero elsewhere
        let mut m = Matrix::zeros(f, 4, 4);
        m.set(0, a.index_of(Blade { j: 1, p: 0 }), f.one());
        let t = CoactionTuple {
            phi: LinearOperator::sigma(&a),
            ds: vec![LinearOperator::new(&a, m).unwrap()],
        };
        let r = verify_tuple(&t);
        let fail = r.first_failure().unwrap();
        assert_eq!(fail.axiom, "skew-derivation");
        assert!(matches!(action_from_tuple(&t), Err(Error::InvalidTuple(_))));
        let bad = action_from_tuple_unchecked(&t);
        assert!(!verify_module_algebra(&bad).check("measuring").unwrap().passed);
        assert!(matches!(tuple_from_action(&bad), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn json_round_trips() {
        let a = alg(1, &[1, 2], &[0, 1]);
        let rho = canonical_coaction(&a).unwrap();
        let back = Coaction::from_json(&a, &rho.to_json()).unwrap();
        assert_eq!(back, rho);
        let t = tuple_from_action(&action_from_coaction(&rho).unwrap()).unwrap();
        assert_eq!(CoactionTuple::from_json(&a, &t.to_json()).unwrap(), t);
    }
}
