//! Coactions described by algebra elements: `φ = φ_c` (or `σφ_c` when `n` is
//! even) and `dᵢ(a) = uᵢa − φ(a)uᵢ`, for semisimple `A`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clifford::{Algebra, CliffordElement};
use crate::comodule::{coaction_from_tuple, verify_comodule_algebra, verify_tuple, Coaction, CoactionTuple, LinearOperator};
use crate::error::{Error, Result};
use crate::exec::{filter_map_range, map_indexed, Exec};
use crate::linalg::{Matrix, Subspace};
use crate::quadratic::{is_semisimple, normalized_pseudoscalar};
use crate::report::Report;
use crate::scalars::FieldElement;

pub use crate::quadratic::delta;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerTuple {
    pub c: CliffordElement,
    pub us: Vec<CliffordElement>,
    /// `φ = σφ_c` instead of `φ_c`; only meaningful for even `n`.
    pub twisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerTupleJson {
    pub c: BTreeMap<String, String>,
    pub u: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub twisted: bool,
}

impl InnerTuple {
    pub fn trivial(algebra: &Algebra) -> Self {
        InnerTuple {
            c: CliffordElement::one(algebra),
            us: vec![CliffordElement::zero(algebra); algebra.n()],
            twisted: false,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        self.c.algebra()
    }

    pub fn to_json(&self) -> InnerTupleJson {
        InnerTupleJson {
            c: self.c.to_json_map(),
            u: self.us.iter().map(|u| u.to_json_map()).collect(),
            twisted: self.twisted,
        }
    }

    pub fn from_json(algebra: &Algebra, json: &InnerTupleJson) -> Result<Self> {
        if json.u.len() != algebra.n() {
            return Err(Error::Arity {
                what: "u",
                expected: algebra.n(),
                got: json.u.len(),
            });
        }
        Ok(InnerTuple {
            c: CliffordElement::from_json_map(algebra, &json.c)?,
            us: json
                .u
                .iter()
                .map(|m| CliffordElement::from_json_map(algebra, m))
                .collect::<Result<_>>()?,
            twisted: json.twisted,
        })
    }

    /// Lexicographic order on `(c, u₁, …, uₙ)` coefficient vectors.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let c = cmp_coeffs(self.c.coeffs(), other.c.coeffs());
        self.us
            .iter()
            .zip(&other.us)
            .fold(c, |acc, (a, b)| acc.then_with(|| cmp_coeffs(a.coeffs(), b.coeffs())))
    }
}

fn cmp_coeffs(a: &[FieldElement], b: &[FieldElement]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn center_space(algebra: &Algebra) -> Subspace {
    let basis: Vec<Vec<FieldElement>> =
        algebra.center().into_iter().map(|z| z.into_coeffs()).collect();
    Subspace::span(algebra.field(), algebra.dim(), &basis)
}

/// `a ↦ c⁻¹ac`.
pub fn phi_inner(c: &CliffordElement) -> Result<LinearOperator> {
    let alg = c.algebra();
    let inv = c.try_invert()?;
    let m = alg.left_matrix(&inv).mul(&alg.right_matrix(c));
    LinearOperator::new(alg, m)
}

fn phi_of(t: &InnerTuple) -> Result<LinearOperator> {
    let phi = phi_inner(&t.c)?;
    Ok(if t.twisted {
        LinearOperator::sigma(t.algebra()).compose(&phi)
    } else {
        phi
    })
}

fn d_from(u: &CliffordElement, phi: &LinearOperator) -> LinearOperator {
    let alg = u.algebra();
    let m = alg.left_matrix(u).sub(&alg.right_matrix(u).mul(phi.matrix()));
    LinearOperator::new(alg, m).expect("square operator")
}

/// `dᵢ(a) = uᵢa − φ(a)uᵢ` with `φ` chosen by the twist flag.
pub fn d_inner(t: &InnerTuple, i: usize) -> Result<LinearOperator> {
    let u = t.us.get(i).ok_or(Error::BadIndex { i, j: t.us.len() })?;
    Ok(d_from(u, &phi_of(t)?))
}

/// The operator tuple `(φ, d₁…dₙ)` induced by `t`, without validation.
pub fn inner_operators(t: &InnerTuple) -> Result<CoactionTuple> {
    let phi = phi_of(t)?;
    let ds = t.us.iter().map(|u| d_from(u, &phi)).collect();
    Ok(CoactionTuple { phi, ds })
}

/// The element conditions for `t`, followed on success by a full check of
/// the induced operator tuple.
pub fn check_inner_tuple(t: &InnerTuple) -> Result<Report> {
    let alg = t.algebra();
    let n = alg.n();
    if t.us.len() != n {
        return Err(Error::Arity {
            what: "u",
            expected: n,
            got: t.us.len(),
        });
    }
    t.c.try_invert()?;
    let z = center_space(alg);
    let central = |a: &CliffordElement| z.contains(a.coeffs());
    let label = |i: usize| format!("u{}", i + 1);
    let mut r = Report::new();

    r.record(
        "twist needs even n",
        (t.twisted && n % 2 == 1).then(|| vec![format!("n = {n}")]),
    );
    let sigma = |a: &CliffordElement| if t.twisted { a.grade_involution() } else { a.clone() };
    let cc = &t.c * &sigma(&t.c);
    r.record("c condition", (!central(&cc)).then(|| vec![cc.to_string()]));
    for (i, u) in t.us.iter().enumerate() {
        let anti = u * &t.c + &t.c * &sigma(u);
        r.record("u anticommutes with c", (!anti.is_zero()).then(|| vec![label(i)]));
        r.record("u squared central", (!central(&(u * u))).then(|| vec![label(i)]));
    }
    for i in 0..n {
        for j in i + 1..n {
            let s = &t.us[i] * &t.us[j] + &t.us[j] * &t.us[i];
            r.record("u anticommutators central", (!central(&s)).then(|| vec![label(i), label(j)]));
        }
    }
    if r.passed {
        let derived = verify_tuple(&inner_operators(t)?);
        let w = derived.first_failure().map(|c| {
            let mut w = vec![c.axiom.clone()];
            w.extend(c.witness.clone().unwrap_or_default());
            w
        });
        r.record("induced operators", w);
    }
    Ok(r)
}

pub fn tuple_to_coaction(t: &InnerTuple) -> Result<Coaction> {
    let r = check_inner_tuple(t)?;
    if let Some(c) = r.first_failure() {
        return Err(Error::InvalidTuple(format!(
            "{} fails at {:?}",
            c.axiom,
            c.witness.clone().unwrap_or_default()
        )));
    }
    coaction_from_tuple(&inner_operators(t)?)
}

fn is_automorphism(phi: &LinearOperator) -> bool {
    let alg = phi.algebra();
    if phi.apply_basis(0) != CliffordElement::one(alg) || phi.matrix().inverse().is_none() {
        return false;
    }
    (0..alg.dim()).all(|a| {
        (0..alg.dim()).all(|b| {
            let ab = CliffordElement::basis(alg, a) * CliffordElement::basis(alg, b);
            phi.apply(&ab) == phi.apply_basis(a) * phi.apply_basis(b)
        })
    })
}

/// An invertible `c` with `φ = φ_c`, if one exists.
///
/// Solves `c·φ(b) = b·c` for the generators `b` (enough, since both sides
/// are multiplicative in `b`), then tries the echelon basis of the solution
/// space followed by small integer combinations of it.
pub fn solve_inner(phi: &LinearOperator) -> Result<Option<CliffordElement>> {
    let alg = phi.algebra();
    if !is_automorphism(phi) {
        return Err(Error::NotAutomorphism);
    }
    let f = alg.field();
    let n = alg.n();
    let mut gens = vec![CliffordElement::g(alg)];
    gens.extend((1..=n).map(|i| CliffordElement::x(alg, i)));
    let mut system: Option<Matrix> = None;
    for b in &gens {
        let block = alg.right_matrix(&phi.apply(b)).sub(&alg.left_matrix(b));
        system = Some(match system {
            None => block,
            Some(s) => s.vstack(&block),
        });
    }
    let sol = Subspace::span(f, alg.dim(), &system.expect("at least G").nullspace());
    let basis: Vec<CliffordElement> = sol
        .basis()
        .iter()
        .map(|v| CliffordElement::from_coeffs(alg, v.clone()))
        .collect();
    let found = basis.iter().find(|c| c.try_invert().is_ok()).cloned().or_else(|| {
        // a generic member is invertible whenever any member is; try a few
        let k = basis.len();
        let coeffs = [0i64, 1, -1, 2, -2];
        let limit = 5usize.saturating_pow(k as u32).min(1 << 14);
        (1..limit).find_map(|mut code| {
            let mut c = CliffordElement::zero(alg);
            for b in &basis {
                let s = f.from_i64(coeffs[code % 5]);
                code /= 5;
                c = &c + &b.scale(&s);
            }
            c.try_invert().is_ok().then_some(c)
        })
    });
    if let Some(c) = &found {
        if phi_inner(c)? != *phi {
            return Err(Error::Internal("conjugation does not reproduce the automorphism".into()));
        }
    }
    Ok(found)
}

/// Recover an inner tuple from a valid operator tuple on a semisimple
/// algebra: `uᵢ = dᵢ(c)c⁻¹/2`, or `uᵢ = dᵢ(z)z⁻¹/2` on the twisted branch.
pub fn inner_from_operators(t: &CoactionTuple) -> Result<Option<InnerTuple>> {
    let alg = t.algebra();
    let r = verify_tuple(t);
    if let Some(c) = r.first_failure() {
        return Err(Error::InvalidTuple(c.axiom.clone()));
    }
    if !is_semisimple(alg) {
        return Err(Error::NotSemisimple);
    }
    let half = alg.field().from_ratio(1, 2)?;
    let build = |c: CliffordElement, w: &CliffordElement, twisted: bool| -> Result<InnerTuple> {
        let w_inv = w.try_invert()?;
        let us = t.ds.iter().map(|d| (d.apply(w) * &w_inv).scale(&half)).collect();
        Ok(InnerTuple { c, us, twisted })
    };
    let candidate = if let Some(c) = solve_inner(&t.phi)? {
        Some(build(c.clone(), &c, false)?)
    } else if alg.n() % 2 == 0 {
        let sigma_phi = LinearOperator::sigma(alg).compose(&t.phi);
        match solve_inner(&sigma_phi)? {
            Some(c) => Some(build(c, &normalized_pseudoscalar(alg), true)?),
            None => None,
        }
    } else {
        None
    };
    if let Some(it) = &candidate {
        if inner_operators(it)? != *t {
            return Err(Error::Internal("reconstructed tuple induces different operators".into()));
        }
    }
    Ok(candidate)
}

/// Same class iff `c′Z = c″Z` and `uᵢ − vᵢ ∈ cZ` (untwisted) or `uᵢ = vᵢ`
/// (twisted).
pub fn tuples_equivalent(t1: &InnerTuple, t2: &InnerTuple) -> Result<bool> {
    if t1.twisted != t2.twisted {
        return Err(Error::FlagMismatch);
    }
    if t1.algebra() != t2.algebra() || t1.us.len() != t2.us.len() {
        return Err(Error::AlgebraMismatch);
    }
    let z = center_space(t1.algebra());
    let c2_inv = t2.c.try_invert()?;
    let c1_inv = t1.c.try_invert()?;
    if !z.contains((&t1.c * &c2_inv).coeffs()) {
        return Ok(false);
    }
    Ok(t1.us.iter().zip(&t2.us).all(|(u, v)| {
        let w = u - v;
        if t1.twisted {
            w.is_zero()
        } else {
            z.contains((&c1_inv * &w).coeffs())
        }
    }))
}

/// Decomposition `A ≅ A₀ × A₀` for even `n` when `δ` is a square.
///
/// `A₀` elements are written as coordinates on the even basis blades, in
/// increasing basis order.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub delta: FieldElement,
    pub sqrt_delta: FieldElement,
    pub z: CliffordElement,
    pub t1: CliffordElement,
    pub t2: CliffordElement,
    /// Basis indices of `A₀`.
    pub even_basis: Vec<usize>,
    /// `(2·dim A₀) × dim A`.
    pub iso_forward: Matrix,
    /// `dim A × (2·dim A₀)`.
    pub iso_backward: Matrix,
}

impl Splitting {
    /// `a₀ + b₀z ↦ (a₀ + √δ b₀, a₀ − √δ b₀)`, as even elements of `A`.
    pub fn forward(&self, a: &CliffordElement) -> (CliffordElement, CliffordElement) {
        let v = self.iso_forward.mul_vec(a.coeffs());
        let h = self.even_basis.len();
        (self.embed(&v[..h]), self.embed(&v[h..]))
    }

    pub fn backward(&self, u: &CliffordElement, v: &CliffordElement) -> CliffordElement {
        let mut coords: Vec<FieldElement> = self.even_basis.iter().map(|&i| u.coeff(i).clone()).collect();
        coords.extend(self.even_basis.iter().map(|&i| v.coeff(i).clone()));
        CliffordElement::from_coeffs(self.z.algebra(), self.iso_backward.mul_vec(&coords))
    }

    fn embed(&self, coords: &[FieldElement]) -> CliffordElement {
        let alg = self.z.algebra();
        let mut e = CliffordElement::zero(alg);
        for (&i, c) in self.even_basis.iter().zip(coords) {
            e = &e + &CliffordElement::basis(alg, i).scale(c);
        }
        e
    }

    /// Idempotents, mutual inverses, multiplicativity on basis pairs, and the
    /// images of `t₁`, `t₂`.
    pub fn verify(&self) -> Report {
        let alg = self.z.algebra();
        let one = CliffordElement::one(alg);
        let zero = CliffordElement::zero(alg);
        let mut r = Report::new();
        let (t1, t2) = (&self.t1, &self.t2);
        r.record("t1 idempotent", (&(t1 * t1) != t1).then(Vec::new));
        r.record("t2 idempotent", (&(t2 * t2) != t2).then(Vec::new));
        r.record("t1 t2 = 0", (!(t1 * t2).is_zero()).then(Vec::new));
        r.record("t1 + t2 = 1", ((t1 + t2) != one).then(Vec::new));
        let d = alg.dim();
        let round = self.iso_backward.mul(&self.iso_forward) == Matrix::identity(alg.field(), d);
        let round2 =
            self.iso_forward.mul(&self.iso_backward) == Matrix::identity(alg.field(), self.iso_forward.rows());
        r.record("backward after forward", (!round).then(Vec::new));
        r.record("forward after backward", (!round2).then(Vec::new));
        let mult = (0..d * d).find_map(|k| {
            let (a, b) = (CliffordElement::basis(alg, k / d), CliffordElement::basis(alg, k % d));
            let (a1, a2) = self.forward(&a);
            let (b1, b2) = self.forward(&b);
            let (p1, p2) = self.forward(&(&a * &b));
            (p1 != &a1 * &b1 || p2 != &a2 * &b2).then(|| vec![alg.label(k / d), alg.label(k % d)])
        });
        r.record("forward multiplicative", mult);
        r.record("t1 maps to (1,0)", (self.forward(t1) != (one.clone(), zero.clone())).then(Vec::new));
        r.record("t2 maps to (0,1)", (self.forward(t2) != (zero, one)).then(Vec::new));
        r
    }
}

pub fn split_even(algebra: &Algebra) -> Result<Splitting> {
    if algebra.n() % 2 == 1 {
        return Err(Error::NotEven);
    }
    if !is_semisimple(algebra) {
        return Err(Error::NotSemisimple);
    }
    let f = algebra.field();
    let delta = delta(algebra);
    let sqrt_delta = delta.sqrt().ok_or(Error::DeltaNotSquare)?;
    let z = normalized_pseudoscalar(algebra);
    let z_inv = z.try_invert()?;
    let half = f.from_ratio(1, 2)?;
    let one = CliffordElement::one(algebra);
    let w = z.scale(&half.div(&sqrt_delta)?);
    let t1 = &one.scale(&half) + &w;
    let t2 = &one.scale(&half) - &w;

    let n = algebra.n();
    let even_basis: Vec<usize> =
        (0..algebra.dim()).filter(|&i| algebra.blade(i).degree() % 2 == 0).collect();
    let h = even_basis.len();
    debug_assert_eq!(h * 2, algebra.dim(), "n = {n}");
    let coords = |e: &CliffordElement| -> Vec<FieldElement> { even_basis.iter().map(|&i| e.coeff(i).clone()).collect() };

    let forward_cols: Vec<Vec<FieldElement>> = (0..algebra.dim())
        .map(|i| {
            let (a0, a1) = CliffordElement::basis(algebra, i).even_odd_split();
            let b0 = &a1 * &z_inv;
            let s = b0.scale(&sqrt_delta);
            let mut col = coords(&(&a0 + &s));
            col.extend(coords(&(&a0 - &s)));
            col
        })
        .collect();
    let iso_forward = Matrix::from_columns(f, 2 * h, &forward_cols);

    let inv_two_root = half.div(&sqrt_delta)?;
    let backward_cols: Vec<Vec<FieldElement>> = (0..2 * h)
        .map(|k| {
            let b = CliffordElement::basis(algebra, even_basis[k % h]);
            let sign = if k < h { f.one() } else { -f.one() };
            // (u+v)/2 + ((u−v)/(2√δ))z for a unit vector in u or v
            let e = &b.scale(&half) + &(&b * &z).scale(&(&inv_two_root * &sign));
            e.into_coeffs()
        })
        .collect();
    let iso_backward = Matrix::from_columns(f, algebra.dim(), &backward_cols);

    let s = Splitting {
        delta,
        sqrt_delta,
        z,
        t1,
        t2,
        even_basis,
        iso_forward,
        iso_backward,
    };
    if let Some(c) = s.verify().first_failure() {
        return Err(Error::Internal(format!("splitting check failed: {}", c.axiom)));
    }
    Ok(s)
}

/// For `n = 1` on a quaternion algebra: the 3-dimensional space of pure
/// quaternions, i.e. trace-zero elements; `{a : a² ∈ k}` is `k` union this
/// space.
pub fn pure_quaternions(algebra: &Algebra) -> Result<Subspace> {
    if algebra.n() != 1 {
        return Err(Error::Unsupported("pure quaternions need n = 1".into()));
    }
    if !is_semisimple(algebra) {
        return Err(Error::NotSemisimple);
    }
    let f = algebra.field();
    let traces: Vec<FieldElement> = (0..4)
        .map(|i| algebra.regular_trace(&CliffordElement::basis(algebra, i)))
        .collect();
    let m = Matrix::from_rows(f, vec![traces])?;
    let space = Subspace::span(f, 4, &m.nullspace());
    // polarization: ab + ba ∈ k on a basis, so every member squares into k
    let b: Vec<CliffordElement> =
        space.basis().iter().map(|v| CliffordElement::from_coeffs(algebra, v.clone())).collect();
    for x in &b {
        for y in &b {
            if (x * y + y * x).as_scalar().is_none() {
                return Err(Error::Internal("trace-zero element squares outside k".into()));
            }
        }
    }
    Ok(space)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Untwisted,
    Twisted,
    /// Untwisted, plus twisted when `n` is even.
    All,
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub branch: Branch,
    pub max_prime: u64,
    pub max_dim: usize,
    /// Cap on the total number of candidate checks in one run.
    pub max_candidates: u64,
    pub max_classes: usize,
    pub exec: Exec,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            branch: Branch::All,
            max_prime: 7,
            max_dim: 16,
            max_candidates: 1 << 22,
            max_classes: 100_000,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumeratedClass {
    pub tuple: InnerTuple,
    pub coaction_digest: String,
}

#[derive(Serialize)]
pub struct ClassJson {
    pub c: BTreeMap<String, String>,
    pub u: Vec<BTreeMap<String, String>>,
    pub twisted: bool,
    pub coaction_digest: String,
}

impl EnumeratedClass {
    pub fn to_json(&self) -> ClassJson {
        let j = self.tuple.to_json();
        ClassJson {
            c: j.c,
            u: j.u,
            twisted: j.twisted,
            coaction_digest: self.coaction_digest.clone(),
        }
    }
}

fn checked_pow(p: u64, k: usize, cap: u64, what: &str) -> Result<u64> {
    let mut total = 1u64;
    for _ in 0..k {
        total = total.checked_mul(p).filter(|&t| t <= cap).ok_or_else(|| {
            Error::TooLarge(format!("{what}: {p}^{k} exceeds the cap of {cap} candidates"))
        })?;
    }
    Ok(total)
}

/// Shared work counter for one enumeration run.
struct Budget {
    cap: u64,
    used: std::sync::atomic::AtomicU64,
}

impl Budget {
    fn new(cap: u64) -> Self {
        Budget { cap, used: 0.into() }
    }

    fn charge(&self, k: u64) -> Result<()> {
        use std::sync::atomic::Ordering::Relaxed;
        let used = self.used.fetch_add(k, Relaxed).saturating_add(k);
        if used > self.cap {
            return Err(Error::TooLarge(format!("search exceeds {} candidate checks", self.cap)));
        }
        Ok(())
    }
}

fn operator_key(phi: &Matrix, ds: &[Matrix]) -> String {
    let mut s = String::new();
    for m in std::iter::once(phi).chain(ds) {
        for row in m.to_strings() {
            s.push_str(&row.join(","));
            s.push(';');
        }
        s.push('|');
    }
    s
}

/// Element number `i` of `GF(p)^dim`, first coefficient most significant, so
/// numeric order is lexicographic order.
fn nth_vector(f: &crate::scalars::Field, p: u64, dim: usize, mut i: u64) -> Vec<FieldElement> {
    let mut v = vec![f.zero(); dim];
    for k in (0..dim).rev() {
        v[k] = f.element_at(i % p).expect("residue");
        i /= p;
    }
    v
}

/// All inequivalent inner tuples over a prime field, each verified end to
/// end, sorted by twist flag and then lexicographically.
pub fn enumerate_coactions(algebra: &Algebra, opts: &EnumerateOptions) -> Result<Vec<EnumeratedClass>> {
    let f = algebra.field();
    let n = algebra.n();
    let p = match (f.order(), f.characteristic()) {
        (Some(q), ch) if q == ch => q,
        _ => return Err(Error::Unsupported("enumeration needs a prime field".into())),
    };
    if p > opts.max_prime {
        return Err(Error::TooLarge(format!("p = {p} exceeds {}", opts.max_prime)));
    }
    if algebra.dim() > opts.max_dim {
        return Err(Error::TooLarge(format!("dimension {} exceeds {}", algebra.dim(), opts.max_dim)));
    }
    if !is_semisimple(algebra) {
        return Err(Error::Unsupported("the classification needs a semisimple algebra".into()));
    }
    let branches: Vec<bool> = match opts.branch {
        Branch::Untwisted => vec![false],
        Branch::Twisted if n % 2 == 1 => {
            return Err(Error::Unsupported("the twisted branch needs even n".into()))
        }
        Branch::Twisted => vec![true],
        Branch::All if n % 2 == 0 => vec![false, true],
        Branch::All => vec![false],
    };
    let dim = algebra.dim();
    let budget = Budget::new(opts.max_candidates);
    let z = center_space(algebra);
    let sigma = LinearOperator::sigma(algebra);
    let z_units: Vec<CliffordElement> = (1..p.pow(z.dim() as u32))
        .map(|i| {
            let t = nth_vector(f, p, z.dim(), i);
            let mut e = CliffordElement::zero(algebra);
            for (s, b) in t.iter().zip(z.basis()) {
                e = &e + &CliffordElement::from_coeffs(algebra, b.clone()).scale(s);
            }
            e
        })
        .filter(|w| *w != CliffordElement::one(algebra) && w.try_invert().is_ok())
        .collect();

    let mut classes: BTreeMap<String, InnerTuple> = BTreeMap::new();
    for twisted in branches {
        let total = checked_pow(p, dim, opts.max_candidates, "c candidates")?;
        budget.charge(total)?;
        let tw = |a: &CliffordElement| if twisted { a.grade_involution() } else { a.clone() };
        // the least member of each coset cZ*, which fixes φ
        let reps = filter_map_range(opts.exec, total, |i| {
            let c = CliffordElement::from_coeffs(algebra, nth_vector(f, p, dim, i));
            if !z.contains((&c * &tw(&c)).coeffs()) {
                return None;
            }
            if z_units.iter().any(|w| cmp_coeffs((&c * w).coeffs(), c.coeffs()).is_lt()) {
                return None;
            }
            let phi = phi_inner(&c).ok()?;
            Some((c, if twisted { sigma.compose(&phi) } else { phi }))
        });

        let per_rep = map_indexed(opts.exec, reps.len(), |k| {
            let (c, phi) = &reps[k];
            u_stage(algebra, p, c, phi, twisted, &z, &budget)
        });
        for found in per_rep {
            for (key, t) in found? {
                match classes.get(&key) {
                    Some(old) if old.lex_cmp(&t) != Ordering::Greater => {}
                    _ => {
                        classes.insert(key, t);
                    }
                }
            }
            if classes.len() > opts.max_classes {
                return Err(Error::TooLarge(format!("more than {} classes", opts.max_classes)));
            }
        }
    }

    let mut tuples: Vec<InnerTuple> = classes.into_values().collect();
    tuples.sort_by(|a, b| a.twisted.cmp(&b.twisted).then_with(|| a.lex_cmp(b)));
    let verified = map_indexed(opts.exec, tuples.len(), |k| -> Result<EnumeratedClass> {
        let t = &tuples[k];
        let rho = tuple_to_coaction(t)?;
        let r = verify_comodule_algebra(&rho);
        if let Some(c) = r.first_failure() {
            return Err(Error::Internal(format!("enumerated class fails {}", c.axiom)));
        }
        Ok(EnumeratedClass {
            tuple: t.clone(),
            coaction_digest: rho.digest(),
        })
    });
    verified.into_iter().collect()
}

/// All `(u₁…uₙ)` for a fixed `c`, keyed by the induced operators and
/// reduced to the least tuple per key.
fn u_stage(
    algebra: &Algebra,
    p: u64,
    c: &CliffordElement,
    phi: &LinearOperator,
    twisted: bool,
    z: &Subspace,
    budget: &Budget,
) -> Result<Vec<(String, InnerTuple)>> {
    let f = algebra.field();
    let n = algebra.n();
    // uc + cu = 0, or uc + cσ(u) = 0
    let mut lhs = algebra.right_matrix(c);
    let left = algebra.left_matrix(c);
    lhs = lhs.add(&if twisted { left.mul(&algebra.sigma_matrix()) } else { left });
    let s = Subspace::span(f, algebra.dim(), &lhs.nullspace());
    let count = checked_pow(p, s.dim(), budget.cap, "u candidates")?;
    budget.charge(count)?;
    let pool: Vec<CliffordElement> = (0..count)
        .map(|i| {
            let t = nth_vector(f, p, s.dim(), i);
            let mut v = vec![f.zero(); algebra.dim()];
            for (tj, b) in t.iter().zip(s.basis()) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += &(tj * y);
                }
            }
            CliffordElement::from_coeffs(algebra, v)
        })
        .filter(|u| z.contains((u * u).coeffs()))
        .collect();
    let ds: Vec<Matrix> = pool.iter().map(|u| d_from(u, phi).matrix().clone()).collect();

    let mut out: BTreeMap<String, InnerTuple> = BTreeMap::new();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        depth: usize,
        n: usize,
        pool: &[CliffordElement],
        z: &Subspace,
        stack: &mut Vec<usize>,
        budget: &Budget,
        emit: &mut dyn FnMut(&[usize]),
    ) -> Result<()> {
        if depth == n {
            emit(stack);
            return Ok(());
        }
        budget.charge(pool.len() as u64)?;
        for k in 0..pool.len() {
            let ok = stack.iter().all(|&j| {
                let s = &pool[j] * &pool[k] + &pool[k] * &pool[j];
                z.contains(s.coeffs())
            });
            if ok {
                stack.push(k);
                rec(depth + 1, n, pool, z, stack, budget, emit)?;
                stack.pop();
            }
        }
        Ok(())
    }
    let mut emit = |idx: &[usize]| {
        let key_ds: Vec<Matrix> = idx.iter().map(|&k| ds[k].clone()).collect();
        let key = operator_key(phi.matrix(), &key_ds);
        let t = InnerTuple {
            c: c.clone(),
            us: idx.iter().map(|&k| pool[k].clone()).collect(),
            twisted,
        };
        match out.get(&key) {
            Some(old) if old.lex_cmp(&t) != Ordering::Greater => {}
            _ => {
                out.insert(key, t);
            }
        }
    };
    rec(0, n, &pool, z, &mut stack, budget, &mut emit)?;
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{AlgebraDescriptor, Blade};
    use crate::comodule::canonical_coaction;
    use crate::scalars::Field;

    fn alg(f: &Field, alpha: i64, beta: &[i64], gamma: &[i64], lambda: &[(usize, usize, i64)]) -> Algebra {
        Algebra::new(AlgebraDescriptor::from_ints(f, alpha, beta, gamma, lambda)).unwrap()
    }

    fn q4() -> Algebra {
        alg(&Field::rational(), 1, &[1], &[0], &[])
    }

    fn el(a: &Algebra, s: &str) -> CliffordElement {
        CliffordElement::basis(a, a.index_of(Blade::parse(s, a.n()).unwrap()))
    }

    fn example_tuple(a: &Algebra) -> InnerTuple {
        let c = el(a, "g x{1}").scale(&a.field().from_i64(2));
        let u = el(a, "g") * c.try_invert().unwrap();
        InnerTuple { c, us: vec![u], twisted: false }
    }

    #[test]
    fn conjugation_by_g_negates_x() {
        let a = q4();
        let phi = phi_inner(&el(&a, "g")).unwrap();
        assert_eq!(phi.apply(&el(&a, "x{1}")), -el(&a, "x{1}"));
        assert_eq!(phi_inner(&CliffordElement::one(&a)).unwrap(), LinearOperator::identity(&a));
        let zero = CliffordElement::zero(&a);
        assert!(matches!(phi_inner(&zero), Err(Error::NotInvertible)));
    }

    #[test]
    fn worked_example_gives_canonical_coaction() {
        let a = q4();
        let t = example_tuple(&a);
        assert!(check_inner_tuple(&t).unwrap().passed);
        let d = d_inner(&t, 0).unwrap();
        assert_eq!(d.apply(&el(&a, "x{1}")), -CliffordElement::one(&a));
        assert!(d.apply(&el(&a, "g")).is_zero());
        assert_eq!(tuple_to_coaction(&t).unwrap(), canonical_coaction(&a).unwrap());
    }

    #[test]
    fn bad_tuple_reports_anticommutation() {
        let a = q4();
        let t = InnerTuple { c: el(&a, "g"), us: vec![el(&a, "g")], twisted: false };
        let r = check_inner_tuple(&t).unwrap();
        assert!(!r.check("u anticommutes with c").unwrap().passed);
        assert!(matches!(tuple_to_coaction(&t), Err(Error::InvalidTuple(_))));
    }

    #[test]
    fn pure_quaternion_conjugation() {
        let a = q4();
        let c = el(&a, "g x{1}");
        let t = InnerTuple { c: c.clone(), us: vec![CliffordElement::zero(&a)], twisted: false };
        let rho = tuple_to_coaction(&t).unwrap();
        let en = rho.en().clone();
        let half = a.field().from_ratio(1, 2).unwrap();
        let one = CliffordElement::one(en.algebra());
        let g = CliffordElement::g(en.algebra());
        let cinv = c.try_invert().unwrap();
        for i in 0..4 {
            let x = CliffordElement::basis(&a, i);
            let mut want = crate::tensor::Tensor::pure(&x, &(&one + &g).scale(&half));
            let conj = &(&cinv * &x) * &c;
            want.add_scaled(&crate::tensor::Tensor::pure(&conj, &(&one - &g).scale(&half)), &a.field().one());
            assert_eq!(rho.apply_basis(i), want);
        }
    }

    #[test]
    fn solver_cases() {
        let a = q4();
        assert_eq!(solve_inner(&LinearOperator::identity(&a)).unwrap(), Some(CliffordElement::one(&a)));
        let c = solve_inner(&LinearOperator::sigma(&a)).unwrap().unwrap();
        let line = Subspace::span(a.field(), 4, &[el(&a, "g x{1}").into_coeffs()]);
        assert!(line.contains(c.coeffs()));
        let even = alg(&Field::rational(), 1, &[1, 1], &[0, 0], &[]);
        assert_eq!(solve_inner(&LinearOperator::sigma(&even)).unwrap(), None);
        let mut bad = Matrix::identity(a.field(), 4);
        bad.set(1, 1, a.field().from_i64(2));
        let bad = LinearOperator::new(&a, bad).unwrap();
        assert!(matches!(solve_inner(&bad), Err(Error::NotAutomorphism)));
    }

    #[test]
    fn reconstruction_from_operators() {
        let a = q4();
        let t = crate::comodule::tuple_from_action(
            &crate::comodule::action_from_coaction(&canonical_coaction(&a).unwrap()).unwrap(),
        )
        .unwrap();
        let it = inner_from_operators(&t).unwrap().unwrap();
        assert!(!it.twisted);
        assert!(tuples_equivalent(&it, &example_tuple(&a)).unwrap());
        // twisted branch on n = 2 with a σ-only tuple
        let even = alg(&Field::rational(), 1, &[1, 1], &[0, 0], &[]);
        let sig = CoactionTuple {
            phi: LinearOperator::sigma(&even),
            ds: vec![LinearOperator::zero(&even); 2],
        };
        let it = inner_from_operators(&sig).unwrap().unwrap();
        assert!(it.twisted);
        assert_eq!(inner_operators(&it).unwrap(), sig);
    }

    #[test]
    fn equivalence_cases() {
        let a = q4();
        let f = a.field();
        let t = example_tuple(&a);
        assert!(tuples_equivalent(&t, &t).unwrap());
        let shifted = InnerTuple {
            c: t.c.scale(&f.from_i64(3)),
            us: vec![&t.us[0] + &t.c.scale(&f.from_i64(5))],
            twisted: false,
        };
        assert!(tuples_equivalent(&t, &shifted).unwrap());
        assert_eq!(inner_operators(&t).unwrap(), inner_operators(&shifted).unwrap());
        let moved = InnerTuple { us: vec![&t.us[0] + &CliffordElement::one(&a)], ..t.clone() };
        assert!(!tuples_equivalent(&t, &moved).unwrap());
        assert_ne!(inner_operators(&t).unwrap(), inner_operators(&moved).unwrap());
        let tw = InnerTuple { twisted: true, ..t.clone() };
        assert!(matches!(tuples_equivalent(&t, &tw), Err(Error::FlagMismatch)));
    }

    #[test]
    fn splitting_over_gf5() {
        let f = Field::prime(5).unwrap();
        let a = alg(&f, 1, &[1, 1], &[0, 0], &[]);
        let s = split_even(&a).unwrap();
        assert_eq!(s.delta, f.from_i64(-1));
        assert_eq!(s.sqrt_delta, f.from_i64(2));
        let want = &CliffordElement::scalar(&a, f.from_ratio(1, 2).unwrap()) + &s.z.scale(&f.from_ratio(1, 4).unwrap());
        assert_eq!(s.t1, want);
        assert!(s.verify().passed);
        let q = alg(&Field::rational(), 1, &[1, 1], &[0, 0], &[]);
        assert!(matches!(split_even(&q), Err(Error::DeltaNotSquare)));
        assert!(matches!(split_even(&q4()), Err(Error::NotEven)));
    }

    #[test]
    fn enumerate_n0() {
        let f = Field::prime(5).unwrap();
        for alpha in [1, 2] {
            let a = alg(&f, alpha, &[], &[], &[]);
            let classes = enumerate_coactions(&a, &EnumerateOptions::default()).unwrap();
            assert_eq!(classes.len(), 2);
            assert!(!classes[0].tuple.twisted && classes[1].tuple.twisted);
            // least representative of the trivial class is c = G, since (0,1) < (1,0)
            assert_eq!(classes[0].tuple.c, CliffordElement::g(&a));
            assert_eq!(inner_operators(&classes[0].tuple).unwrap(), CoactionTuple::trivial(&a));
            let sig = inner_operators(&classes[1].tuple).unwrap();
            assert_eq!(sig.phi, LinearOperator::sigma(&a));
        }
    }

    #[test]
    fn enumerate_rejects_bad_inputs() {
        let f = Field::prime(3).unwrap();
        let ext = alg(&f, 0, &[0], &[0], &[]);
        assert!(matches!(enumerate_coactions(&ext, &EnumerateOptions::default()), Err(Error::Unsupported(_))));
        let q = alg(&f, 1, &[1], &[0], &[]);
        let opts = EnumerateOptions { branch: Branch::Twisted, ..Default::default() };
        assert!(matches!(enumerate_coactions(&q, &opts), Err(Error::Unsupported(_))));
        let big = alg(&Field::prime(11).unwrap(), 1, &[], &[], &[]);
        assert!(matches!(enumerate_coactions(&big, &EnumerateOptions::default()), Err(Error::TooLarge(_))));
    }
}
