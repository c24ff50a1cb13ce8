//! Feasibility of homogeneous strict inequalities `A x > 0` over `Q` by
//! Fourier-Motzkin elimination.
//!
//! By Gordan's alternative the system is infeasible exactly when a non-zero
//! `y >= 0` has `y^T A = 0`; elimination keeps track of such multipliers.

use num::{Signed, Zero};

use super::field::Rational;

#[derive(Clone, PartialEq, Debug)]
pub enum StrictCone {
    /// A point with `A x > 0`.
    Point(Vec<Rational>),
    /// `y >= 0`, `y != 0`, with `y^T A = 0`.
    Empty(Vec<Rational>),
}

#[derive(Clone)]
struct Row {
    a: Vec<Rational>,
    y: Vec<Rational>,
}

impl Row {
    fn leading_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// Scale so that the last non-zero coefficient has absolute value 1.
    fn normalize(mut self) -> Row {
        if let Some(c) = self.a.iter().rev().find(|x| !x.is_zero()).map(|c| c.abs()) {
            for x in self.a.iter_mut().chain(self.y.iter_mut()) {
                *x = x.clone() / c.clone();
            }
        }
        self
    }
}

/// Decide `A x > 0` for the rows of `A`, each of length `nvars`.
pub fn strict_cone(rows: &[Vec<Rational>], nvars: usize) -> StrictCone {
    let m = rows.len();
    let mut sys: Vec<Row> = rows
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut y = vec![Rational::zero(); m];
            y[i] = Rational::from_integer(1.into());
            Row { a: a.clone(), y }
        })
        .collect();
    // stages[v] involves only variables 0..v
    let mut stages: Vec<Vec<Row>> = vec![Vec::new(); nvars + 1];
    for v in (0..nvars).rev() {
        if let Some(r) = sys.iter().find(|r| r.leading_zero()) {
            return StrictCone::Empty(r.y.clone());
        }
        stages[v + 1] = sys.clone();
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in sys {
            if r.a[v].is_positive() {
                pos.push(r);
            } else if r.a[v].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        for p in &pos {
            for n in &neg {
                let (cp, cn) = (p.a[v].clone(), -n.a[v].clone());
                let comb = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
                    x.iter().zip(y).map(|(a, b)| a.clone() * cn.clone() + b.clone() * cp.clone()).collect()
                };
                let mut a = comb(&p.a, &n.a);
                a[v] = Rational::zero();
                next.push(Row { a, y: comb(&p.y, &n.y) }.normalize());
            }
        }
        next.sort_by(|x, y| x.a.cmp(&y.a));
        next.dedup_by(|x, y| x.a == y.a);
        sys = next;
    }
    if let Some(r) = sys.first() {
        return StrictCone::Empty(r.y.clone());
    }
    let mut x = vec![Rational::zero(); nvars];
    for v in 0..nvars {
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for r in &stages[v + 1] {
            let c = &r.a[v];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = (0..v).map(|u| r.a[u].clone() * x[u].clone()).sum();
            let b = -rest / c.clone();
            if c.is_positive() {
                lo = Some(lo.map_or(b.clone(), |l| if b > l { b.clone() } else { l }));
            } else {
                hi = Some(hi.map_or(b.clone(), |h| if b < h { b.clone() } else { h }));
            }
        }
        let one = Rational::from_integer(1.into());
        x[v] = match (lo, hi) {
            (Some(l), Some(h)) => (l + h) / Rational::from_integer(2.into()),
            (Some(l), None) => l.floor() + one,
            (None, Some(h)) => h.ceil() - one,
            (None, None) => Rational::zero(),
        };
    }
    StrictCone::Point(x)
}

/// `A x > 0` holds for every row.
pub fn satisfies(rows: &[Vec<Rational>], x: &[Rational]) -> bool {
    rows.iter().all(|a| a.iter().zip(x).map(|(p, q)| p.clone() * q.clone()).sum::<Rational>().is_positive())
}

/// `y >= 0`, `y != 0` and `y^T A = 0`.
pub fn is_certificate(rows: &[Vec<Rational>], nvars: usize, y: &[Rational]) -> bool {
    y.len() == rows.len()
        && y.iter().all(|c| !c.is_negative())
        && y.iter().any(|c| !c.is_zero())
        && (0..nvars).all(|v| rows.iter().zip(y).map(|(a, c)| a[v].clone() * c.clone()).sum::<Rational>().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::int;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn open_quadrant() {
        let rows = vec![r(&[1, 0]), r(&[0, 1]), r(&[-1, 2])];
        match strict_cone(&rows, 2) {
            StrictCone::Point(x) => assert!(satisfies(&rows, &x)),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn opposite_rows() {
        let rows = vec![r(&[1, 1]), r(&[0, 1]), r(&[-2, -3])];
        match strict_cone(&rows, 2) {
            StrictCone::Empty(y) => assert!(is_certificate(&rows, 2, &y)),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn zero_row_is_infeasible() {
        let rows = vec![r(&[1]), r(&[0])];
        assert_eq!(strict_cone(&rows, 1), StrictCone::Empty(r(&[0, 1])));
    }
}
