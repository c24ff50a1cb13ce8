use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Field, Rational};
use super::mat::{dot, Mat};
use crate::Error;

/// Inertia of a symmetric or Hermitian form.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

/// `u^T G v`, bilinear in both slots.
pub fn bilinear<T: Field>(g: &Mat<T>, u: &[T], v: &[T]) -> T {
    dot(u, &g.apply(v))
}

/// Gram matrix `G_ij = B(b_i, b_j)` of a bilinear form on a list of vectors.
pub fn gram<T: Field>(g: &Mat<T>, vs: &[Vec<T>]) -> Mat<T> {
    let gv: Vec<Vec<T>> = vs.iter().map(|v| g.apply(v)).collect();
    Mat::from_fn(vs.len(), vs.len(), |i, j| dot(&vs[i], &gv[j]))
}

pub fn is_symmetric<T: Field>(g: &Mat<T>) -> bool {
    g.is_square() && *g == g.transpose()
}

pub fn is_skew<T: Field>(g: &Mat<T>) -> bool {
    g.is_square() && *g == -&g.transpose()
}

pub fn is_hermitian<T: Field>(g: &Mat<T>) -> bool {
    g.is_square() && *g == g.conj_transpose()
}

/// Signature by conjugate-symmetric congruence (Lagrange reduction).
///
/// Over [`Rational`] this is the signature of a symmetric matrix; over
/// `Gaussian` it is the inertia of a Hermitian matrix.
pub fn signature<T: Field>(g: &Mat<T>) -> Result<Signature, Error> {
    if !is_hermitian(g) {
        return Err(Error::Precondition("signature needs a symmetric/Hermitian matrix".into()));
    }
    Ok(diagonalize(g).0)
}

/// Signature together with the congruence: returns `(sig, P, D)` where the
/// columns of `P` form a basis with `P^* G P = D` diagonal.
pub fn diagonalize<T: Field>(g: &Mat<T>) -> (Signature, Mat<T>, Vec<Rational>) {
    let n = g.rows();
    let mut m = g.clone();
    let mut p = Mat::<T>::identity(n);
    let mut sig = Signature { pos: 0, neg: 0, zero: 0 };
    let mut diag = Vec::with_capacity(n);

    // new basis vector b_k' = b_k + c b_j: row k += conj(c) row j, col k += c col j
    let add = |m: &mut Mat<T>, p: &mut Mat<T>, k: usize, j: usize, c: &T| {
        for t in 0..n {
            let v = m.get(k, t).clone() + c.conj() * m.get(j, t).clone();
            m.set(k, t, v);
        }
        for t in 0..n {
            let v = m.get(t, k).clone() + c.clone() * m.get(t, j).clone();
            m.set(t, k, v);
        }
        for t in 0..n {
            let v = p.get(t, k).clone() + c.clone() * p.get(t, j).clone();
            p.set(t, k, v);
        }
    };
    let swap = |m: &mut Mat<T>, p: &mut Mat<T>, a: usize, b: usize| {
        for t in 0..n {
            let (x, y) = (m.get(a, t).clone(), m.get(b, t).clone());
            m.set(a, t, y);
            m.set(b, t, x);
        }
        for t in 0..n {
            let (x, y) = (m.get(t, a).clone(), m.get(t, b).clone());
            m.set(t, a, y);
            m.set(t, b, x);
        }
        for t in 0..n {
            let (x, y) = (p.get(t, a).clone(), p.get(t, b).clone());
            p.set(t, a, y);
            p.set(t, b, x);
        }
    };

    for k in 0..n {
        if m.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m.get(j, j).is_zero()) {
                swap(&mut m, &mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !m.get(k, j).is_zero()) {
                let c = m.get(k, j).conj();
                add(&mut m, &mut p, k, j, &c);
            }
        }
        let d = m.get(k, k).real_part();
        if d.is_zero() {
            sig.zero += 1;
            diag.push(d);
            continue;
        }
        if d.is_positive() {
            sig.pos += 1;
        } else {
            sig.neg += 1;
        }
        for i in k + 1..n {
            if m.get(k, i).is_zero() {
                continue;
            }
            let t = -(m.get(k, i).clone() / m.get(k, k).clone());
            add(&mut m, &mut p, i, k, &t);
        }
        diag.push(d);
    }
    (sig, p, diag)
}

/// Whether a Hermitian (or real symmetric) matrix is positive definite.
pub fn is_positive_definite<T: Field>(g: &Mat<T>) -> bool {
    signature(g).map(|s| s.pos == g.rows()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{gauss, int, Gaussian};

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn reference_signatures() {
        let s = |m: Mat<Rational>| {
            let s = signature(&m).unwrap();
            (s.pos, s.neg, s.zero)
        };
        assert_eq!(s(q(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]])), (2, 1, 0));
        assert_eq!(s(q(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])), (2, 1, 0));
        assert_eq!(s(q(&[&[0, 0], &[0, 0]])), (0, 0, 2));
    }

    #[test]
    fn congruence_is_exact() {
        let g = q(&[&[0, 2, 1], &[2, 0, 3], &[1, 3, 0]]);
        let (_, p, d) = diagonalize(&g);
        let dm = Mat::diag(&d);
        assert_eq!(&(&p.transpose() * &g) * &p, dm);
    }

    #[test]
    fn hermitian_inertia() {
        // [[0, i], [-i, 0]] has eigenvalues ±1
        let z = Gaussian::zero();
        let g = Mat::from_rows(vec![
            vec![z.clone(), gauss(int(0), int(1))],
            vec![gauss(int(0), int(-1)), z],
        ])
        .unwrap();
        let s = signature(&g).unwrap();
        assert_eq!((s.pos, s.neg), (1, 1));
        assert!(signature(&g.map(|x| x.clone() + gauss(int(0), int(1)))).is_err());
    }
}
