use std::collections::HashSet;

use coact::clifford::{Algebra, AlgebraDescriptor, CliffordElement};
use coact::comodule::{verify_tuple, CoactionTuple, LinearOperator};
use coact::exec::Exec;
use coact::inner::{
    enumerate_coactions, inner_operators, pure_quaternions, tuples_equivalent, Branch, EnumerateOptions,
};
use coact::linalg::Matrix;
use coact::scalars::Field;

fn quaternions(p: u64) -> Algebra {
    Algebra::new(AlgebraDescriptor::from_ints(&Field::prime(p).unwrap(), 1, &[1], &[0], &[])).unwrap()
}

/// Every operator tuple `(φ, d)` on `Cl(1,1,0)` over GF(p), found from the
/// images of G and X alone: relations for φ, then a linear solve for d.
fn brute_force_tuples(a: &Algebra) -> Vec<CoactionTuple> {
    let f = a.field();
    let elems: Vec<CliffordElement> = {
        let q = f.order().unwrap();
        (0..q.pow(4))
            .map(|mut i| {
                let mut v = Vec::new();
                for _ in 0..4 {
                    v.push(f.element_at(i % q).unwrap());
                    i /= q;
                }
                CliffordElement::from_coeffs(a, v)
            })
            .collect()
    };
    let one = CliffordElement::one(a);
    let g = CliffordElement::g(a);
    let x = CliffordElement::x(a, 1);
    let gx = &g * &x;
    // basis order is 1, x{1}, g, g x{1}
    assert_eq!(CliffordElement::basis(a, 1), x);
    assert_eq!(CliffordElement::basis(a, 3), gx);
    let mut out = Vec::new();
    for pg in &elems {
        if pg * pg != one {
            continue;
        }
        for px in &elems {
            if px * px != one || !(pg * px + px * pg).is_zero() {
                continue;
            }
            let cols = [one.clone(), px.clone(), pg.clone(), pg * px];
            let phi = LinearOperator::from_fn(a, |i| cols[i].clone());
            if phi.compose(&phi) != LinearOperator::identity(a) {
                continue;
            }
            // unknowns (d(G), d(X)) ∈ A²; relations from G² = 1, X² = 1, GX + XG = 0
            let rg = a.right_matrix(&g).add(&a.left_matrix(pg));
            let rx = a.right_matrix(&x).add(&a.left_matrix(px));
            let zero = Matrix::zeros(f, 4, 4);
            let mut sys = hcat(&rg, &zero);
            sys = sys.vstack(&hcat(&zero, &rx));
            sys = sys.vstack(&hcat(
                &a.right_matrix(&x).add(&a.left_matrix(px)),
                &a.left_matrix(pg).add(&a.right_matrix(&g)),
            ));
            let null = sys.nullspace();
            let q = f.order().unwrap();
            for code in 0..q.pow(null.len() as u32) {
                let mut v = vec![f.zero(); 8];
                let mut c = code;
                for b in &null {
                    let s = f.element_at(c % q).unwrap();
                    c /= q;
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &(&s * y);
                    }
                }
                let dg = CliffordElement::from_coeffs(a, v[..4].to_vec());
                let dx = CliffordElement::from_coeffs(a, v[4..].to_vec());
                let dgx = &dg * &x + pg * &dx;
                let dcols = [CliffordElement::zero(a), dx, dg, dgx];
                let d = LinearOperator::from_fn(a, |i| dcols[i].clone());
                let t = CoactionTuple { phi: phi.clone(), ds: vec![d] };
                if verify_tuple(&t).passed {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn hcat(l: &Matrix, r: &Matrix) -> Matrix {
    l.transpose().vstack(&r.transpose()).transpose()
}

#[test]
fn quaternion_gf3_matches_brute_force() {
    let a = quaternions(3);
    let classes = enumerate_coactions(&a, &EnumerateOptions::default()).unwrap();
    let brute = brute_force_tuples(&a);
    let keys: HashSet<String> = brute.iter().map(|t| format!("{t:?}")).collect();
    assert_eq!(keys.len(), brute.len());
    let enumerated: HashSet<String> = classes
        .iter()
        .map(|c| format!("{:?}", inner_operators(&c.tuple).unwrap()))
        .collect();
    assert_eq!(enumerated, keys);

    // the shape of every nontrivial class: pure c, and u pure and orthogonal to c
    let pure = pure_quaternions(&a).unwrap();
    let trivial = CoactionTuple::trivial(&a);
    for class in &classes {
        let t = &class.tuple;
        if inner_operators(t).unwrap() == trivial {
            continue;
        }
        assert!(pure.contains(t.c.coeffs()));
        let u = &t.us[0];
        assert!(u.is_zero() || pure.contains(u.coeffs()));
        assert!((u * &t.c + &t.c * u).is_zero());
    }
    // distinct classes are inequivalent
    for (i, x) in classes.iter().enumerate() {
        for y in &classes[i + 1..] {
            assert!(!tuples_equivalent(&x.tuple, &y.tuple).unwrap());
        }
    }
}

#[test]
fn strategies_give_identical_output() {
    let a = quaternions(3);
    let run = |exec| {
        let opts = EnumerateOptions { exec, ..Default::default() };
        enumerate_coactions(&a, &opts)
            .unwrap()
            .into_iter()
            .map(|c| c.coaction_digest)
            .collect::<Vec<_>>()
    };
    assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
}

#[test]
fn branches_split_for_even_n() {
    let f = Field::prime(7).unwrap();
    let a = Algebra::new(AlgebraDescriptor::from_ints(&f, 3, &[], &[], &[])).unwrap();
    let run = |branch| enumerate_coactions(&a, &EnumerateOptions { branch, ..Default::default() }).unwrap();
    let u = run(Branch::Untwisted);
    let t = run(Branch::Twisted);
    assert_eq!((u.len(), t.len()), (1, 1));
    assert!(!u[0].tuple.twisted && t[0].tuple.twisted);
    assert_eq!(run(Branch::All).len(), 2);
}

#[test]
fn n2_over_gf3_hits_the_class_cap() {
    let f = Field::prime(3).unwrap();
    let a = Algebra::new(AlgebraDescriptor::from_ints(&f, 1, &[1, 1], &[0, 0], &[])).unwrap();
    let opts = EnumerateOptions { branch: Branch::Twisted, max_classes: 50, ..Default::default() };
    assert!(matches!(enumerate_coactions(&a, &opts), Err(coact::Error::TooLarge(_))));
}
