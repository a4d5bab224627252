//! Sparse tensors over basis labels: `Tensor<2>` holds elements of `A⊗B`,
//! `Tensor<3>` of triple products. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::{Algebra, CliffordElement};
use crate::scalars::{Field, FieldElement};

#[derive(Clone, PartialEq, Eq)]
pub struct Tensor<const N: usize> {
    field: Field,
    terms: BTreeMap<[usize; N], FieldElement>,
}

pub type TensorElement = Tensor<2>;

impl<const N: usize> Tensor<N> {
    pub fn zero(field: &Field) -> Self {
        Tensor {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(field: &Field, key: [usize; N]) -> Self {
        let mut t = Self::zero(field);
        t.add_term(key, &field.one());
        t
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn add_term(&mut self, key: [usize; N], c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &FieldElement) {
        for (k, c) in &other.terms {
            self.add_term(*k, &(c * s));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize; N], &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[usize; N]) -> FieldElement {
        self.terms.get(key).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &FieldElement) -> Self {
        let mut t = Self::zero(&self.field);
        t.add_scaled(self, s);
        t
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut t = self.clone();
        t.add_scaled(other, &-self.field.one());
        t
    }

    /// Factorwise product, factor `i` multiplied in `algebras[i]`.
    pub fn mul(&self, other: &Self, algebras: [&Algebra; N]) -> Self {
        let mut out = Self::zero(&self.field);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let c = ca * cb;
                // expand the product of the N factor products
                let mut partial: Vec<([usize; N], FieldElement)> = vec![([0; N], c)];
                for i in 0..N {
                    let prods = algebras[i].mul_basis(ka[i], kb[i]);
                    let mut next = Vec::with_capacity(partial.len() * prods.len());
                    for (key, coef) in &partial {
                        for (k, s) in prods {
                            let mut key = *key;
                            key[i] = *k;
                            next.push((key, coef * s));
                        }
                    }
                    partial = next;
                }
                for (key, coef) in partial {
                    out.add_term(key, &coef);
                }
            }
        }
        out
    }

    /// Dense coefficient vector, row-major over the factor dimensions.
    pub fn to_dense(&self, dims: [usize; N]) -> Vec<FieldElement> {
        let total: usize = dims.iter().product();
        let mut v = vec![self.field.zero(); total];
        for (k, c) in &self.terms {
            v[flat_index(k, &dims)] = c.clone();
        }
        v
    }

    pub fn from_dense(field: &Field, dims: [usize; N], v: &[FieldElement]) -> Self {
        let mut t = Self::zero(field);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                t.terms.insert(unflatten(i, &dims), c.clone());
            }
        }
        t
    }
}

fn flat_index<const N: usize>(key: &[usize; N], dims: &[usize; N]) -> usize {
    key.iter().zip(dims).fold(0, |acc, (k, d)| acc * d + k)
}

fn unflatten<const N: usize>(mut i: usize, dims: &[usize; N]) -> [usize; N] {
    let mut key = [0; N];
    for f in (0..N).rev() {
        key[f] = i % dims[f];
        i /= dims[f];
    }
    key
}

impl Tensor<2> {
    /// `a ⊗ b` for algebra elements.
    pub fn pure(a: &CliffordElement, b: &CliffordElement) -> Self {
        let mut t = Self::zero(a.algebra().field());
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                t.add_term([i, j], &(x * y));
            }
        }
        t
    }

    /// Swap the two legs.
    pub fn flip(&self) -> Self {
        let mut t = Self::zero(&self.field);
        for ([a, b], c) in &self.terms {
            t.add_term([*b, *a], c);
        }
        t
    }

    /// `{"<left> ⊗ <right>": coeff}` with labels from the two algebras.
    pub fn to_json_map(&self, left: &Algebra, right: &Algebra) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|([a, b], c)| (format!("{} ⊗ {}", left.label(*a), right.label(*b)), c.to_string()))
            .collect()
    }

    pub fn from_json_map(
        left: &Algebra,
        right: &Algebra,
        map: &BTreeMap<String, String>,
    ) -> crate::Result<Self> {
        use crate::clifford::Blade;
        let mut t = Self::zero(left.field());
        for (label, coeff) in map {
            let (a, b) = label
                .split_once('⊗')
                .ok_or_else(|| crate::Error::Parse(format!("tensor label {label:?} lacks '⊗'")))?;
            let a = left.index_of(Blade::parse(a, left.n())?);
            let b = right.index_of(Blade::parse(b, right.n())?);
            t.add_term([a, b], &left.field().parse(coeff)?);
        }
        Ok(t)
    }
}

impl<const N: usize> fmt::Debug for Tensor<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(k, c)| (k, c.to_string()))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::AlgebraDescriptor;

    #[test]
    fn dense_round_trip() {
        let f = Field::rational();
        let mut t = Tensor::<3>::zero(&f);
        t.add_term([1, 0, 2], &f.from_i64(5));
        t.add_term([0, 1, 1], &f.from_i64(-1));
        let v = t.to_dense([2, 2, 3]);
        assert_eq!(Tensor::from_dense(&f, [2, 2, 3], &v), t);
    }

    #[test]
    fn product_of_pure_tensors() {
        let f = Field::rational();
        let a = Algebra::new(AlgebraDescriptor::from_ints(&f, 1, &[1], &[0], &[])).unwrap();
        let g = CliffordElement::g(&a);
        let x = CliffordElement::x(&a, 1);
        let t = Tensor::pure(&g, &x).mul(&Tensor::pure(&x, &g), [&a, &a]);
        assert_eq!(t, Tensor::pure(&(&g * &x), &(&x * &g)));
        assert!(t.sub(&t).is_zero());
    }
}
