//! Jordan strings of nilpotent operators and classification of nilpotent
//! infinitesimal isometries by signed Young diagrams.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diagrams::{dokovic_leq, Partition, Row, Sign, SignedDiagram};
use crate::exact::form::{is_skew, is_symmetric, signature};
use crate::exact::mat::dot;
use crate::exact::{Field, Mat, Rational, Subspace};
use crate::Error;

/// One Jordan string `v, Nv, ..., N^l v` with `N^(l+1) v = 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct NString<T> {
    pub top: Vec<T>,
    /// `l + 1`.
    pub len: usize,
}

#[derive(Clone, PartialEq, Debug)]
pub struct StringBasis<T> {
    pub strings: Vec<NString<T>>,
}

impl<T: Field> StringBasis<T> {
    /// `(string index, a, N^a v)` for every basis vector.
    pub fn vectors(&self, n: &Mat<T>) -> Vec<(usize, usize, Vec<T>)> {
        let mut out = Vec::new();
        for (k, s) in self.strings.iter().enumerate() {
            let mut v = s.top.clone();
            for a in 0..s.len {
                out.push((k, a, v.clone()));
                v = n.apply(&v);
            }
        }
        out
    }

    /// Change-of-basis matrix whose columns are the string vectors.
    pub fn basis_matrix(&self, n: &Mat<T>) -> Mat<T> {
        let vs: Vec<Vec<T>> = self.vectors(n).into_iter().map(|(_, _, v)| v).collect();
        Mat::from_cols(n.rows(), &vs)
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.strings.iter().map(|s| s.len as u32).collect())
    }

    /// Strings of length `l + 1`, i.e. a basis of a primitive space `P(l)`.
    pub fn primitives(&self, l: usize) -> Vec<Vec<T>> {
        self.strings.iter().filter(|s| s.len == l + 1).map(|s| s.top.clone()).collect()
    }
}

pub fn require_nilpotent<T: Field>(n: &Mat<T>) -> Result<u32, Error> {
    if !n.is_square() {
        return Err(Error::Dimension("operator must be square".into()));
    }
    n.nilpotency_index()
        .ok_or_else(|| Error::Precondition("operator is not nilpotent".into()))
}

/// Decompose `T^n` into `N`-strings. For each length the tops are a
/// complement of `ker N^(len-1) + N ker N^(len+1)` in `ker N^len`.
pub fn string_decomposition<T: Field>(n: &Mat<T>) -> Result<StringBasis<T>, Error> {
    let idx = require_nilpotent(n)? as usize;
    let dim = n.rows();
    let kers: Vec<Subspace<T>> = (0..=idx + 1)
        .map(|j| Subspace::span(dim, &n.pow(j as u32).kernel()))
        .collect();
    let mut strings = Vec::new();
    for len in (1..=idx).rev() {
        let u = kers[len - 1].sum(&kers[len + 1].image(n));
        for top in kers[len].complement_of(&u) {
            strings.push(NString { top, len });
        }
    }
    Ok(StringBasis { strings })
}

pub fn partition_of<T: Field>(n: &Mat<T>) -> Result<Partition, Error> {
    Ok(string_decomposition(n)?.partition())
}

/// `Q_l(u, v) = Q(u, N^l v)` is `(-1)^(w+l)`-symmetric; for `w + l` even the
/// label of a positive direction is `+` exactly when `w` even, `l ≡ 0 (4)` or
/// `w` odd, `l ≡ 1 (4)`.
pub fn leading_sign(weight: i64, l: usize) -> Option<Sign> {
    if (weight + l as i64) % 2 != 0 {
        return None;
    }
    let r = l % 4;
    let plus = if weight.rem_euclid(2) == 0 { r == 0 } else { r == 1 };
    Some(if plus { Sign::Plus } else { Sign::Minus })
}

/// Check that `Q` is non-degenerate with parity `(-1)^w` and `N` is an
/// infinitesimal isometry.
pub fn check_form(n: &Mat<Rational>, q: &Mat<Rational>, weight: i64) -> Result<(), Error> {
    if q.rows() != n.rows() || !q.is_square() {
        return Err(Error::Dimension("form and operator sizes differ".into()));
    }
    let sym_ok = if weight.rem_euclid(2) == 0 { is_symmetric(q) } else { is_skew(q) };
    if !sym_ok {
        return Err(Error::Precondition(format!("form does not have parity (-1)^{weight}")));
    }
    if q.det().is_zero() {
        return Err(Error::Precondition("form is degenerate".into()));
    }
    if !(&(&n.transpose() * q) + &(q * n)).is_zero() {
        return Err(Error::Precondition("operator is not an infinitesimal isometry".into()));
    }
    Ok(())
}

/// Signed Young diagram of a nilpotent infinitesimal isometry of `Q`, where
/// `Q` has parity `(-1)^weight`.
pub fn signed_diagram_of(
    n: &Mat<Rational>,
    q: &Mat<Rational>,
    weight: i64,
) -> Result<SignedDiagram, Error> {
    check_form(n, q, weight)?;
    let sb = string_decomposition(n)?;
    let max = sb.strings.iter().map(|s| s.len).max().unwrap_or(0);
    let mut rows = Vec::new();
    for l in 0..max {
        let p = sb.primitives(l);
        if p.is_empty() {
            continue;
        }
        let nl = n.pow(l as u32);
        let np: Vec<Vec<Rational>> = p.iter().map(|v| nl.apply(v)).collect();
        let g = Mat::from_fn(p.len(), p.len(), |i, j| dot(&p[i], &q.apply(&np[j])));
        let len = l as u32 + 1;
        match leading_sign(weight, l) {
            Some(s0) => {
                let sig = signature(&g)?;
                if sig.zero != 0 {
                    return Err(Error::Precondition(format!("Q_{l} degenerate on P({l})")));
                }
                rows.extend(std::iter::repeat(Row::new(len, s0)).take(sig.pos));
                rows.extend(std::iter::repeat(Row::new(len, s0.flip())).take(sig.neg));
            }
            None => {
                if g.det().is_zero() {
                    return Err(Error::Precondition(format!("Q_{l} degenerate on P({l})")));
                }
                rows.extend(std::iter::repeat(Row::new(len, Sign::Blank)).take(p.len()));
            }
        }
    }
    Ok(SignedDiagram::new(rows))
}

/// A pair `(N, Q)` in string coordinates realizing an admissible diagram for
/// a form of parity `(-1)^weight`.
pub fn realize(d: &SignedDiagram, weight: i64) -> Result<(Mat<Rational>, Mat<Rational>), Error> {
    let dim = d.size() as usize;
    let mut n = Mat::<Rational>::zeros(dim, dim);
    let mut q = Mat::<Rational>::zeros(dim, dim);
    let eps = if weight.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() };
    let alt = |a: usize| if a % 2 == 0 { Rational::one() } else { -Rational::one() };
    let mut off = 0;
    let rows = d.rows();
    let mut k = 0;
    while k < rows.len() {
        let r = rows[k];
        let l = r.len as usize - 1;
        for a in 0..l {
            n.set(off + a + 1, off + a, Rational::one());
        }
        match (r.sign, leading_sign(weight, l)) {
            (Sign::Blank, None) => {
                let Some(r2) = rows.get(k + 1).filter(|r2| **r2 == r) else {
                    return Err(Error::Precondition(format!("unpaired blank row in `{d}`")));
                };
                let off2 = off + r.len as usize;
                for a in 0..l {
                    n.set(off2 + a + 1, off2 + a, Rational::one());
                }
                for a in 0..=l {
                    let b = l - a;
                    // Q(N^a v, N^b v') = (-1)^a, Q(N^a v', N^b v) = eps (-1)^b
                    q.set(off + a, off2 + b, alt(a));
                    q.set(off2 + a, off + b, eps.clone() * alt(b));
                }
                off = off2 + r2.len as usize;
                k += 2;
                continue;
            }
            (Sign::Plus | Sign::Minus, Some(s0)) => {
                let c = if r.sign == s0 { Rational::one() } else { -Rational::one() };
                for a in 0..=l {
                    q.set(off + a, off + l - a, c.clone() * alt(a));
                }
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "row {} of `{d}` has the wrong label for weight {weight}",
                    r.len
                )))
            }
        }
        off += r.len as usize;
        k += 1;
    }
    Ok((n, q))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrbitComparison {
    pub same_orbit: bool,
    pub in_closure: bool,
}

pub fn same_orbit(
    n1: &Mat<Rational>,
    n2: &Mat<Rational>,
    q: &Mat<Rational>,
    weight: i64,
) -> Result<bool, Error> {
    Ok(signed_diagram_of(n1, q, weight)? == signed_diagram_of(n2, q, weight)?)
}

/// Whether the orbit of `n1` lies in the closure of the orbit of `n2`.
pub fn in_closure(
    n1: &Mat<Rational>,
    n2: &Mat<Rational>,
    q: &Mat<Rational>,
    weight: i64,
) -> Result<bool, Error> {
    Ok(dokovic_leq(&signed_diagram_of(n1, q, weight)?, &signed_diagram_of(n2, q, weight)?))
}

/// Complex closure relation by dominance of Jordan types.
pub fn in_closure_complex<T: Field>(n1: &Mat<T>, n2: &Mat<T>) -> Result<bool, Error> {
    Ok(partition_of(n1)?.dominated_by(&partition_of(n2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::int;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn jordan_type_4221() {
        // blocks of sizes 4, 2, 2, 1 in coordinates
        let sizes = [4usize, 2, 2, 1];
        let dim: usize = sizes.iter().sum();
        let mut n = Mat::<Rational>::zeros(dim, dim);
        let mut off = 0;
        for s in sizes {
            for a in 0..s - 1 {
                n.set(off + a + 1, off + a, int(1));
            }
            off += s;
        }
        let sb = string_decomposition(&n).unwrap();
        assert_eq!(sb.partition(), Partition::new(vec![4, 2, 2, 1]));
        let m = |l: usize| sb.primitives(l).len();
        assert_eq!((m(3), m(1), m(0), m(2)), (1, 2, 1, 0));
        assert_eq!(sb.basis_matrix(&n).rank(), dim);
    }

    #[test]
    fn single_three_string() {
        let n = q(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        // Q(v, N^2 v) = 1, Q(Nv, Nv) = -1: signature (1, 2), label 3-
        let form = q(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]);
        let d = signed_diagram_of(&n, &form, 2).unwrap();
        assert_eq!(d.to_string(), "3-");
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        let n = Mat::<Rational>::zeros(2, 2);
        let form = q(&[&[0, 1], &[-1, 0]]);
        assert!(signed_diagram_of(&n, &form, 2).is_err());
        assert!(signed_diagram_of(&n, &form, 1).is_ok());
    }

    #[test]
    fn realize_round_trips() {
        for (s, w) in [("3+ 2 2 1-", 2), ("2+ 2- 1 1", 1), ("4- 1 1", 1), ("3- 3- 1+ 1+ 1+", 2)] {
            let d: SignedDiagram = s.parse().unwrap();
            let (n, form) = realize(&d, w).unwrap();
            assert_eq!(signed_diagram_of(&n, &form, w).unwrap(), d, "{s}");
        }
    }
}
