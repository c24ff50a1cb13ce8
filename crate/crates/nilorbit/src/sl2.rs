//! `sl2`-triples `(N+, Y, N)` with `[Y, N+] = 2N+`, `[N+, N] = Y`,
//! `[Y, N] = -2N`, and the decomposition of operators under `ad`.

use crate::exact::{Field, Mat, Solution, Subspace};
use crate::filtrations::{ad_component, monodromy_filtration, Grading};
use crate::Error;

#[derive(Clone, PartialEq, Debug)]
pub struct Sl2Triple<T> {
    pub n_plus: Mat<T>,
    pub y: Mat<T>,
    pub n: Mat<T>,
}

impl<T: Field> Sl2Triple<T> {
    pub fn check(&self) -> Result<(), Error> {
        let two = T::from_int(2);
        let c = Mat::commutator;
        if c(&self.y, &self.n_plus) != self.n_plus.scale(&two) {
            return Err(Error::Precondition("[Y, N+] != 2 N+".into()));
        }
        if c(&self.n_plus, &self.n) != self.y {
            return Err(Error::Precondition("[N+, N] != Y".into()));
        }
        if c(&self.y, &self.n) != self.n.scale(&(-two)) {
            return Err(Error::Precondition("[Y, N] != -2 N".into()));
        }
        Ok(())
    }

    pub fn grading(&self) -> Grading<T> {
        Grading::from_matrix(&self.y).expect("neutral element of a triple is a grading")
    }
}

/// Complete an `sl2`-pair `(N, Y)` (Y a grading of `W(N)` centered at 0 with
/// `[Y, N] = -2N`) to a triple. On a string `v, Nv, ..., N^l v` with top `v`
/// of weight `l`, `N+ (N^a v) = a (l - a + 1) N^(a-1) v`.
pub fn complete_triple<T: Field>(n: &Mat<T>, y: &Mat<T>) -> Result<Sl2Triple<T>, Error> {
    if n.rows() != y.rows() || !n.is_square() || !y.is_square() {
        return Err(Error::Dimension("N and Y must be square of equal size".into()));
    }
    let g = Grading::from_matrix(y)?;
    if Mat::commutator(y, n) != n.scale(&T::from_int(-2)) {
        return Err(Error::Precondition("[Y, N] != -2N".into()));
    }
    if !g.grades(&monodromy_filtration(n, 0)?) {
        return Err(Error::Precondition("Y does not grade W(N) centered at 0".into()));
    }
    let dim = n.rows();
    let mut basis = Vec::new();
    let mut images = Vec::new();
    for l in g.labels().into_iter().filter(|&l| l >= 0) {
        let prim = g
            .eigenspace(l)
            .intersect(&Subspace::span(dim, &n.pow(l as u32 + 1).kernel()));
        for v in prim.basis() {
            let mut cur = v.clone();
            let mut prev: Option<Vec<T>> = None;
            for a in 0..=l {
                basis.push(cur.clone());
                let c = T::from_int(a * (l - a + 1));
                images.push(match &prev {
                    Some(p) => p.iter().map(|x| c.clone() * x.clone()).collect(),
                    None => vec![T::zero(); dim],
                });
                prev = Some(cur.clone());
                cur = n.apply(&cur);
            }
        }
    }
    let n_plus = Mat::from_action(&basis, &images)?;
    let t = Sl2Triple { n_plus, y: y.clone(), n: n.clone() };
    t.check()?;
    Ok(t)
}

/// The raising operator `N+` of an `sl2`-pair `(N, H)`.
pub fn raising_from_pair<T: Field>(n: &Mat<T>, h: &Mat<T>) -> Result<Mat<T>, Error> {
    Ok(complete_triple(n, h)?.n_plus)
}

/// `ad Y`-weight component of `t`.
pub fn weight_component<T: Field>(t: &Mat<T>, y: &Mat<T>, w: i64) -> Result<Mat<T>, Error> {
    Ok(ad_component(t, &Grading::from_matrix(y)?, w))
}

/// Within the `ad Y`-weight space of weight `weight`, `t = [N, gamma] + h`
/// with `h` of highest weight (`[N+, h] = 0`).
#[derive(Clone, PartialEq, Debug)]
pub struct IsotypicPart<T> {
    pub weight: i64,
    pub component: Mat<T>,
    pub gamma: Mat<T>,
    pub image_part: Mat<T>,
    pub highest: Mat<T>,
}

/// Decompose `t` into `im(ad N) ⊕ ker(ad N+)` inside every `ad Y`-weight space.
pub fn isotypic_decompose<T: Field>(
    t: &Mat<T>,
    triple: &Sl2Triple<T>,
) -> Result<Vec<IsotypicPart<T>>, Error> {
    let g = triple.grading();
    let comps = crate::filtrations::ad_components(t, &g);
    let mut out = Vec::new();
    for (w, c) in comps {
        let gamma = solve_gamma(&c, triple, &g, w)?;
        let image_part = Mat::commutator(&triple.n, &gamma);
        let highest = &c - &image_part;
        out.push(IsotypicPart { weight: w, component: c, gamma, image_part, highest });
    }
    Ok(out)
}

/// `gamma` of `ad Y`-weight `w + 2` with `[N+, c - [N, gamma]] = 0`.
pub fn solve_gamma<T: Field>(
    c: &Mat<T>,
    triple: &Sl2Triple<T>,
    g: &Grading<T>,
    w: i64,
) -> Result<Mat<T>, Error> {
    let dim = c.rows();
    let space = weight_space_basis(g, w + 2, dim);
    if space.is_empty() {
        if !Mat::commutator(&triple.n_plus, c).is_zero() {
            return Err(Error::Precondition(format!("weight-{w} part has no highest-weight split")));
        }
        return Ok(Mat::zeros(dim, dim));
    }
    let lin: Vec<Vec<T>> = space
        .iter()
        .map(|b| Mat::commutator(&triple.n_plus, &Mat::commutator(&triple.n, b)).to_vec())
        .collect();
    let a = Mat::from_cols(dim * dim, &lin);
    let rhs = Mat::commutator(&triple.n_plus, c).to_vec();
    match a.solve(&rhs) {
        Solution::Solvable { particular, .. } => {
            let mut gamma = Mat::zeros(dim, dim);
            for (x, b) in particular.iter().zip(&space) {
                gamma = &gamma + &b.scale(x);
            }
            Ok(gamma)
        }
        Solution::Inconsistent { .. } => {
            Err(Error::Precondition(format!("weight-{w} part has no highest-weight split")))
        }
    }
}

/// A basis of `{x in End(V) : [Y, x] = w x}`.
pub fn weight_space_basis<T: Field>(g: &Grading<T>, w: i64, dim: usize) -> Vec<Mat<T>> {
    joint_weight_basis(&[(g, w)], dim).expect("a single grading")
}

/// A basis of the joint `ad`-weight space of pairwise commuting gradings,
/// `{x : [Y_i, x] = w_i x for all i}`.
pub fn joint_weight_basis<T: Field>(
    gs: &[(&Grading<T>, i64)],
    dim: usize,
) -> Result<Vec<Mat<T>>, Error> {
    let (vecs, labels) = joint_eigenbasis(&gs.iter().map(|(g, _)| *g).collect::<Vec<_>>(), dim)?;
    let p = Mat::from_cols(dim, &vecs);
    let pinv = p.inverse().expect("joint eigenbasis");
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if labels[i].iter().zip(&labels[j]).zip(gs).any(|((a, b), (_, w))| a - b != *w) {
                continue;
            }
            let mut e = Mat::zeros(dim, dim);
            e.set(i, j, T::one());
            out.push(&(&p * &e) * &pinv);
        }
    }
    Ok(out)
}

/// A basis adapted to all the gradings at once, with the label tuple of each
/// vector. The gradings must commute.
pub fn joint_eigenbasis<T: Field>(
    gs: &[&Grading<T>],
    dim: usize,
) -> Result<(Vec<Vec<T>>, Vec<Vec<i64>>), Error> {
    let mut parts: Vec<(Vec<i64>, Subspace<T>)> = vec![(Vec::new(), Subspace::full(dim))];
    for g in gs {
        let mut next = Vec::new();
        for (lab, s) in &parts {
            for (&k, e) in g.spaces() {
                let i = s.intersect(e);
                if !i.is_zero() {
                    let mut l = lab.clone();
                    l.push(k);
                    next.push((l, i));
                }
            }
        }
        parts = next;
    }
    let mut vecs = Vec::new();
    let mut labels = Vec::new();
    for (l, s) in parts {
        for b in s.basis() {
            vecs.push(b.clone());
            labels.push(l.clone());
        }
    }
    if vecs.len() != dim {
        return Err(Error::Precondition("gradings do not commute".into()));
    }
    Ok((vecs, labels))
}

/// `[N+, t] = 0` and `[Y, t] = w t`.
pub fn is_highest_weight<T: Field>(t: &Mat<T>, triple: &Sl2Triple<T>, w: i64) -> bool {
    Mat::commutator(&triple.n_plus, t).is_zero()
        && Mat::commutator(&triple.y, t) == t.scale(&T::from_int(w))
}

/// `[N, t] = 0` and `[Y, t] = w t`.
pub fn is_lowest_weight<T: Field>(t: &Mat<T>, triple: &Sl2Triple<T>, w: i64) -> bool {
    Mat::commutator(&triple.n, t).is_zero()
        && Mat::commutator(&triple.y, t) == t.scale(&T::from_int(w))
}
