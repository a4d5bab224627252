//! The quadratic form attached to a Clifford-type algebra and everything that
//! is read off it: congruence diagonalization, semisimplicity, the Jacobson
//! radical and the semisimple quotient, bialgebra admissibility and the
//! centre trichotomy.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::clifford::{Algebra, AlgebraDescriptor, CliffordElement};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::FieldElement;

/// The symmetric `(n+1)×(n+1)` matrix `Q`, generator order `G, X₁…Xₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm {
    matrix: Matrix,
}

impl SymmetricForm {
    pub fn new(matrix: Matrix) -> Result<SymmetricForm> {
        if matrix.rows() != matrix.cols() || matrix != matrix.transpose() {
            return Err(Error::Dimension("form matrix must be square and symmetric".into()));
        }
        Ok(SymmetricForm { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> FieldElement {
        self.matrix.det()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// `Pᵀ·Q·P = D`; the columns of `P` are the new basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub p: Matrix,
    pub d: Matrix,
}

impl Congruence {
    pub fn diagonal(&self) -> Vec<FieldElement> {
        (0..self.d.rows()).map(|i| self.d.get(i, i).clone()).collect()
    }
}

pub fn build_q(algebra: &Algebra) -> SymmetricForm {
    let desc = algebra.descriptor();
    let f = &desc.field;
    let n = desc.n;
    let half = f.from_ratio(1, 2).expect("characteristic is not 2");
    let mut m = Matrix::zeros(f, n + 1, n + 1);
    m.set(0, 0, desc.alpha.clone());
    for i in 1..=n {
        m.set(i, i, desc.beta[i - 1].clone());
        let g = &desc.gamma[i - 1] * &half;
        m.set(0, i, g.clone());
        m.set(i, 0, g);
        for j in i + 1..=n {
            let l = &desc.lambda(i, j) * &half;
            m.set(i, j, l.clone());
            m.set(j, i, l);
        }
    }
    SymmetricForm { matrix: m }
}

struct Work {
    m: Matrix,
    p: Matrix,
}

impl Work {
    /// `e_i ← e_i + c·e_j`
    fn add_multiple(&mut self, i: usize, j: usize, c: &FieldElement) {
        let size = self.m.rows();
        for r in 0..size {
            let x = self.p.get(r, i) + &(c * self.p.get(r, j));
            self.p.set(r, i, x);
        }
        for k in 0..size {
            let x = self.m.get(i, k) + &(c * self.m.get(j, k));
            self.m.set(i, k, x);
        }
        for k in 0..size {
            let x = self.m.get(k, i) + &(c * self.m.get(k, j));
            self.m.set(k, i, x);
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let size = self.m.rows();
        for r in 0..size {
            let (a, b) = (self.p.get(r, i).clone(), self.p.get(r, j).clone());
            self.p.set(r, i, b);
            self.p.set(r, j, a);
        }
        for k in 0..size {
            let (a, b) = (self.m.get(i, k).clone(), self.m.get(j, k).clone());
            self.m.set(i, k, b);
            self.m.set(j, k, a);
        }
        for k in 0..size {
            let (a, b) = (self.m.get(k, i).clone(), self.m.get(k, j).clone());
            self.m.set(k, i, b);
            self.m.set(k, j, a);
        }
    }
}

/// Symmetric Gaussian elimination. At step `k` the pivot is the lowest-index
/// nonzero diagonal entry of the trailing block; when that diagonal is all
/// zero but some `M[i][j] ≠ 0`, first replace `e_i` by `e_i + e_j`.
pub fn diagonalize(q: &SymmetricForm) -> Congruence {
    let size = q.size();
    let f = q.matrix.field().clone();
    let mut w = Work {
        m: q.matrix.clone(),
        p: Matrix::identity(&f, size),
    };
    for k in 0..size {
        let pivot = match (k..size).find(|&i| !w.m.get(i, i).is_zero()) {
            Some(i) => i,
            None => {
                let pair = (k..size)
                    .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
                    .find(|&(i, j)| !w.m.get(i, j).is_zero());
                match pair {
                    Some((i, j)) => {
                        w.add_multiple(i, j, &f.one());
                        i
                    }
                    None => break,
                }
            }
        };
        w.swap(k, pivot);
        let inv = w.m.get(k, k).invert().expect("pivot is nonzero");
        for r in k + 1..size {
            if w.m.get(r, k).is_zero() {
                continue;
            }
            let c = -(w.m.get(r, k) * &inv);
            w.add_multiple(r, k, &c);
        }
    }
    let check = w.p.transpose().mul(&q.matrix).mul(&w.p);
    debug_assert_eq!(check, w.m, "congruence");
    Congruence { p: w.p, d: w.m }
}

/// Element `Σ vᵢ eᵢ` of the generating space, `e₀ = G`, `eᵢ = Xᵢ`.
pub fn vector_element(algebra: &Algebra, v: &[FieldElement]) -> CliffordElement {
    let mut e = CliffordElement::zero(algebra);
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let gen = if i == 0 {
            CliffordElement::g(algebra)
        } else {
            CliffordElement::x(algebra, i)
        };
        e = &e + &gen.scale(c);
    }
    e
}

/// The orthogonal algebra read off `D`, with the images of its generators
/// (the columns of `P`) in the original algebra.
pub fn orthogonalize_algebra(algebra: &Algebra) -> Result<(Algebra, Vec<CliffordElement>)> {
    let cong = diagonalize(&build_q(algebra));
    let diag = cong.diagonal();
    let f = algebra.field();
    let new = Algebra::new(AlgebraDescriptor::orthogonal(f, diag[0].clone(), diag[1..].to_vec()))?;
    let images: Vec<CliffordElement> = (0..diag.len())
        .map(|k| vector_element(algebra, &cong.p.column(k)))
        .collect();
    for (a, va) in images.iter().enumerate() {
        if (va * va).as_scalar().as_ref() != Some(&diag[a]) {
            return Err(Error::Internal(format!("orthogonal generator {a} has the wrong square")));
        }
        for vb in &images[a + 1..] {
            if !(va * vb + vb * va).is_zero() {
                return Err(Error::Internal("orthogonal generators do not anticommute".into()));
            }
        }
    }
    Ok((new, images))
}

/// Product of the orthogonal generators from [`diagonalize`], in the original
/// basis. Its square is `δ·det(P)²`.
pub fn pseudoscalar(algebra: &Algebra) -> CliffordElement {
    let cong = diagonalize(&build_q(algebra));
    (0..=algebra.n()).fold(CliffordElement::one(algebra), |acc, k| {
        &acc * &vector_element(algebra, &cong.p.column(k))
    })
}

/// The pseudoscalar divided by `det P`, so that its square is exactly `δ`.
pub fn normalized_pseudoscalar(algebra: &Algebra) -> CliffordElement {
    let cong = diagonalize(&build_q(algebra));
    let det = cong.p.det().invert().expect("congruence matrices are invertible");
    pseudoscalar(algebra).scale(&det)
}

pub fn is_semisimple(algebra: &Algebra) -> bool {
    !build_q(algebra).det().is_zero()
}

/// `δ = (−1)^{n(n+1)/2} det Q`.
pub fn delta(algebra: &Algebra) -> FieldElement {
    let n = algebra.n();
    let det = build_q(algebra).det();
    if (n * (n + 1) / 2) % 2 == 1 {
        -det
    } else {
        det
    }
}

/// Linear basis of the ideal generated by `ker Q`, in reduced echelon form.
pub fn radical(algebra: &Algebra) -> Vec<CliffordElement> {
    let q = build_q(algebra);
    let seeds: Vec<Vec<FieldElement>> = q
        .matrix()
        .nullspace()
        .iter()
        .map(|v| vector_element(algebra, v).into_coeffs())
        .collect();
    let f = algebra.field();
    let dim = algebra.dim();
    let mut span = Subspace::span(f, dim, &seeds);
    loop {
        let mut vectors = span.basis().to_vec();
        for s in span.basis() {
            let s = CliffordElement::from_coeffs(algebra, s.clone());
            for b in 0..dim {
                let b = CliffordElement::basis(algebra, b);
                vectors.push((&b * &s).into_coeffs());
                vectors.push((&s * &b).into_coeffs());
            }
        }
        let next = Subspace::span(f, dim, &vectors);
        if next.dim() == span.dim() {
            break;
        }
        span = next;
    }
    span.basis()
        .iter()
        .map(|v| CliffordElement::from_coeffs(algebra, v.clone()))
        .collect()
}

#[derive(Clone, Debug)]
pub enum Quotient {
    /// `ker Q` is everything; the quotient is the ground field.
    GroundField,
    Clifford(Algebra),
}

#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub quotient: Quotient,
    /// `dim(quotient) × dim(A)`.
    pub projection: Matrix,
}

impl QuotientMap {
    pub fn quotient_dim(&self) -> usize {
        self.projection.rows()
    }

    fn multiply(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        match &self.quotient {
            Quotient::GroundField => vec![&x[0] * &y[0]],
            Quotient::Clifford(q) => {
                let a = CliffordElement::from_coeffs(q, x.to_vec());
                let b = CliffordElement::from_coeffs(q, y.to_vec());
                (&a * &b).into_coeffs()
            }
        }
    }
}

/// `A / J(A)` realised as the Clifford algebra on a complement `W` of `ker Q`
/// spanned by the generators that are not pivots of the echelon kernel basis.
pub fn quotient_semisimple(algebra: &Algebra) -> Result<QuotientMap> {
    let q = build_q(algebra);
    let f = algebra.field().clone();
    let size = q.size();
    let dim = algebra.dim();
    let kernel = Subspace::span(&f, size, &q.matrix().nullspace());
    let w: Vec<usize> = (0..size).filter(|i| !kernel.pivots().contains(i)).collect();

    let map = if w.is_empty() {
        let mut proj = Matrix::zeros(&f, 1, dim);
        proj.set(0, 0, f.one());
        QuotientMap {
            quotient: Quotient::GroundField,
            projection: proj,
        }
    } else {
        let qm = q.matrix();
        let two = f.from_i64(2);
        let mut lambda = BTreeMap::new();
        for a in 1..w.len() {
            for b in a + 1..w.len() {
                lambda.insert((a, b), &two * qm.get(w[a], w[b]));
            }
        }
        let desc = AlgebraDescriptor {
            field: f.clone(),
            n: w.len() - 1,
            alpha: qm.get(w[0], w[0]).clone(),
            beta: w[1..].iter().map(|&i| qm.get(i, i).clone()).collect(),
            gamma: w[1..].iter().map(|&i| &two * qm.get(w[0], i)).collect(),
            lambda,
        };
        let quot = Algebra::new(desc)?;
        let gen = |t: usize| {
            if t == 0 {
                CliffordElement::g(&quot)
            } else {
                CliffordElement::x(&quot, t)
            }
        };
        // image of each original generator
        let images: Vec<CliffordElement> = (0..size)
            .map(|i| match w.iter().position(|&x| x == i) {
                Some(t) => gen(t),
                None => {
                    let r = kernel.pivots().iter().position(|&p| p == i).unwrap();
                    let row = &kernel.basis()[r];
                    w.iter().enumerate().fold(CliffordElement::zero(&quot), |acc, (t, &wi)| {
                        &acc - &gen(t).scale(&row[wi])
                    })
                }
            })
            .collect();
        let mut proj = Matrix::zeros(&f, quot.dim(), dim);
        for idx in 0..dim {
            let blade = algebra.blade(idx);
            let mut img = CliffordElement::one(&quot);
            if blade.j == 1 {
                img = &img * &images[0];
            }
            for i in blade.subset() {
                img = &img * &images[i];
            }
            proj.set_column(idx, img.coeffs());
        }
        QuotientMap {
            quotient: Quotient::Clifford(quot),
            projection: proj,
        }
    };

    // verify: multiplicative, surjective, kernel = radical
    for a in 0..dim {
        for b in 0..dim {
            let prod = CliffordElement::basis(algebra, a) * CliffordElement::basis(algebra, b);
            let lhs = map.projection.mul_vec(prod.coeffs());
            let rhs = map.multiply(&map.projection.column(a), &map.projection.column(b));
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "projection not multiplicative on ({}, {})",
                    algebra.label(a),
                    algebra.label(b)
                )));
            }
        }
    }
    if map.projection.rank() != map.quotient_dim() {
        return Err(Error::Internal("projection is not surjective".into()));
    }
    let rad: Vec<Vec<FieldElement>> = radical(algebra).into_iter().map(|e| e.into_coeffs()).collect();
    if Subspace::span(&f, dim, &map.projection.nullspace()) != Subspace::span(&f, dim, &rad) {
        return Err(Error::Internal("projection kernel differs from the radical".into()));
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub rank_q: usize,
    pub reason: String,
}

/// Whether the algebra is isomorphic to `E(n)` and so carries a bialgebra
/// structure: `rank Q = 1` with the surviving diagonal entry a square.
pub fn bialgebra_admissible(algebra: &Algebra) -> Admissibility {
    let q = build_q(algebra);
    let rank_q = q.rank();
    if rank_q != 1 {
        return Admissibility {
            admissible: false,
            rank_q,
            reason: format!("rank of Q is {rank_q}, not 1"),
        };
    }
    let cong = diagonalize(&q);
    let entry = cong.diagonal().into_iter().find(|x| !x.is_zero()).expect("rank 1");
    if entry.is_square() {
        Admissibility {
            admissible: true,
            rank_q,
            reason: format!("rank 1 and {entry} is a square"),
        }
    } else {
        Admissibility {
            admissible: false,
            rank_q,
            reason: format!("rank 1 but {entry} is not a square"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CentralSimpleOverK,
    CentralSimpleOverQuadraticExtension,
    ProductOfTwoCSA,
    NotSemisimple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub n_parity: &'static str,
    pub det_q: String,
    pub delta: String,
    pub delta_square: bool,
    pub verdict: Verdict,
    pub center_dim: usize,
    /// Whether `center_dim` is what the verdict predicts.
    pub center_consistent: bool,
}

pub fn classify_structure(algebra: &Algebra) -> StructureReport {
    let n = algebra.n();
    let det = build_q(algebra).det();
    let d = delta(algebra);
    let delta_square = d.is_square();
    let verdict = if det.is_zero() {
        Verdict::NotSemisimple
    } else if n % 2 == 1 {
        Verdict::CentralSimpleOverK
    } else if delta_square {
        Verdict::ProductOfTwoCSA
    } else {
        Verdict::CentralSimpleOverQuadraticExtension
    };
    let center_dim = algebra.center().len();
    let center_consistent = match verdict {
        Verdict::CentralSimpleOverK => center_dim == 1,
        Verdict::CentralSimpleOverQuadraticExtension | Verdict::ProductOfTwoCSA => center_dim == 2,
        Verdict::NotSemisimple => true,
    };
    StructureReport {
        n_parity: if n % 2 == 1 { "odd" } else { "even" },
        det_q: det.to_string(),
        delta: d.to_string(),
        delta_square,
        verdict,
        center_dim,
        center_consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn alg(f: &Field, alpha: i64, beta: &[i64], gamma: &[i64], lambda: &[(usize, usize, i64)]) -> Algebra {
        Algebra::new(AlgebraDescriptor::from_ints(f, alpha, beta, gamma, lambda)).unwrap()
    }

    #[test]
    fn q_for_n1() {
        let f = Field::rational();
        let a = alg(&f, 3, &[5], &[4], &[]);
        let q = build_q(&a);
        assert_eq!(q.matrix().to_strings(), vec![vec!["3", "2"], vec!["2", "5"]]);
        // αβ − γ²/4
        assert_eq!(q.det(), f.from_i64(11));
    }

    #[test]
    fn hyperbolic_plane() {
        let f = Field::rational();
        let q = SymmetricForm::new(
            Matrix::from_rows(&f, vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]]).unwrap(),
        )
        .unwrap();
        let c = diagonalize(&q);
        assert_eq!(c.diagonal(), vec![f.from_i64(2), f.from_ratio(-1, 2).unwrap()]);
        assert_eq!(c.p.transpose().mul(q.matrix()).mul(&c.p), c.d);
    }

    #[test]
    fn one_pivot_step() {
        let f = Field::rational();
        let a = alg(&f, 2, &[3], &[2], &[]);
        let c = diagonalize(&build_q(&a));
        // β − γ²/(4α) = 3 − 1/2
        assert_eq!(c.diagonal(), vec![f.from_i64(2), f.from_ratio(5, 2).unwrap()]);
        let diag = alg(&f, 2, &[3, 4], &[0, 0], &[]);
        assert_eq!(diagonalize(&build_q(&diag)).p, Matrix::identity(&f, 3));
    }

    #[test]
    fn orthogonalize_degenerate() {
        let f = Field::rational();
        let (new, images) = orthogonalize_algebra(&alg(&f, 1, &[1], &[2], &[])).unwrap();
        assert_eq!(new.descriptor().alpha, f.one());
        assert!(new.descriptor().beta[0].is_zero());
        assert_eq!(images.len(), 2);
    }

    #[test]
    fn radicals() {
        let f = Field::rational();
        let a = alg(&f, 1, &[0], &[0], &[]);
        let r = radical(&a);
        let x = CliffordElement::x(&a, 1);
        let gx = CliffordElement::g(&a) * &x;
        assert_eq!(r, vec![x, gx]);
        assert!(radical(&alg(&f, 1, &[1], &[0], &[])).is_empty());
        let ext = alg(&f, 0, &[0, 0], &[0, 0], &[]);
        assert_eq!(radical(&ext).len(), ext.dim() - 1);
    }

    #[test]
    fn quotients() {
        let f = Field::rational();
        let a = alg(&f, 1, &[0], &[0], &[]);
        let m = quotient_semisimple(&a).unwrap();
        assert_eq!(m.quotient_dim(), 2);
        let x = CliffordElement::x(&a, 1);
        assert!(crate::linalg::is_zero_vec(&m.projection.mul_vec(x.coeffs())));
        let ext = alg(&f, 0, &[0], &[0], &[]);
        assert!(matches!(quotient_semisimple(&ext).unwrap().quotient, Quotient::GroundField));
        let ss = alg(&f, 1, &[1], &[0], &[]);
        let m = quotient_semisimple(&ss).unwrap();
        assert_eq!(m.projection, Matrix::identity(&f, 4));
    }

    #[test]
    fn quotient_with_nonorthogonal_kernel() {
        // Q = [[1,1],[1,1]]: kernel spanned by e₀ − e₁
        let f = Field::rational();
        let a = alg(&f, 1, &[1], &[2], &[]);
        let m = quotient_semisimple(&a).unwrap();
        assert_eq!(m.quotient_dim(), 2);
    }

    #[test]
    fn admissibility() {
        let q = Field::rational();
        let gf7 = Field::prime(7).unwrap();
        assert!(bialgebra_admissible(&alg(&q, 1, &[0, 0], &[0, 0], &[])).admissible);
        assert!(!bialgebra_admissible(&alg(&q, 0, &[0, 0], &[0, 0], &[])).admissible);
        assert!(!bialgebra_admissible(&alg(&q, 2, &[0], &[0], &[])).admissible);
        assert!(bialgebra_admissible(&alg(&gf7, 2, &[0], &[0], &[])).admissible);
    }

    #[test]
    fn trichotomy_for_cl3() {
        let cases = [
            (Field::rational(), Verdict::CentralSimpleOverQuadraticExtension),
            (Field::prime(5).unwrap(), Verdict::ProductOfTwoCSA),
            (Field::prime(7).unwrap(), Verdict::CentralSimpleOverQuadraticExtension),
        ];
        for (f, want) in cases {
            let r = classify_structure(&alg(&f, 1, &[1, 1], &[0, 0], &[]));
            assert_eq!(r.verdict, want, "{f:?}");
            assert_eq!(r.center_dim, 2);
            assert!(r.center_consistent);
        }
        let r = classify_structure(&alg(&Field::rational(), 1, &[1], &[0], &[]));
        assert_eq!(r.verdict, Verdict::CentralSimpleOverK);
        assert_eq!(r.center_dim, 1);
    }

    #[test]
    fn pseudoscalars() {
        let f = Field::rational();
        let a = alg(&f, 1, &[1, 1], &[0, 0], &[]);
        let z = pseudoscalar(&a);
        assert_eq!(z, CliffordElement::basis(&a, 0b111));
        assert_eq!((&z * &z).as_scalar(), Some(f.from_i64(-1)));
        let b = alg(&f, 2, &[3], &[2], &[]);
        let z = normalized_pseudoscalar(&b);
        assert_eq!((&z * &z).as_scalar(), Some(f.from_i64(1 - 6)));
    }
}
