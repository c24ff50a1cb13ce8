//! Weight-two period domains: explicit split limits, the Levi action on
//! `g^{-1,-1}`, orbit tests, nilpotent cones, and commuting root `sl2`s in
//! `so(4, m - 4)`.
//!
//! Real basis of a model with parameters `(a, b, c, d)`, in order:
//! `e_s, Ne_s, f_j, NNe_s` (the part `V_0`), `u_s, v_s, Nu_s, Nv_s` (`V_1`
//! and its conjugate), `x_s, y_s` (`V_2` and its conjugate).

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{check_form, partition_of, signed_diagram_of};
use crate::diagrams::{dokovic_leq, SignedDiagram};
use crate::exact::field::{gauss, imag_unit, int, rat};
use crate::exact::form::{diagonalize, gram, is_positive_definite, is_symmetric};
use crate::exact::mat::{add_vec, dot, scale_vec, unit_vec};
use crate::exact::text::mat_to_json;
use crate::exact::{signature, Field, Gaussian, Mat, Rational, Subspace};
use crate::filtrations::{deligne_bigrading, monodromy_filtration, Bigrading, Filtration, Grading, HodgeFiltration};
use crate::hodge::{chromosome, diamond_of};
use crate::report::Report;
use crate::sl2::Sl2Triple;
use crate::{Error, GMat, QMat, QSubspace};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Dims {
    pub fn dim(&self) -> usize {
        3 * self.a + self.b + 4 * self.c + 2 * self.d
    }

    pub fn h20(&self) -> usize {
        self.a + self.c + self.d
    }

    pub fn h11(&self) -> usize {
        self.a + self.b + 2 * self.c
    }
}

/// Start of each block of the model basis.
#[derive(Clone, Copy, Debug)]
struct Layout {
    e: usize,
    ne: usize,
    f: usize,
    nne: usize,
    u: usize,
    v: usize,
    nu: usize,
    nv: usize,
    x: usize,
    y: usize,
    end: usize,
}

impl Layout {
    fn new(k: Dims) -> Self {
        let e = 0;
        let ne = e + k.a;
        let f = ne + k.a;
        let nne = f + k.b;
        let u = nne + k.a;
        let v = u + k.c;
        let nu = v + k.c;
        let nv = nu + k.c;
        let x = nv + k.c;
        let y = x + k.d;
        Layout { e, ne, f, nne, u, v, nu, nv, x, y, end: y + k.d }
    }

    fn v0(&self) -> Vec<usize> {
        (self.e..self.u).collect()
    }

    fn v1(&self) -> Vec<usize> {
        (self.u..self.x).collect()
    }

    fn v2(&self) -> Vec<usize> {
        (self.x..self.end).collect()
    }
}

/// An explicit split polarized limit of weight 2 with parameters
/// `a = dim V^{2,2}`, `a + b = dim V^{1,1}`, `c = dim V^{1,2}`, `d = dim V^{0,2}`.
#[derive(Clone, Debug)]
pub struct Weight2Model {
    pub dims: Dims,
    pub basis: Vec<String>,
    pub q: QMat,
    /// The part of `N` on `V_0`.
    pub n0: QMat,
    /// The part of `N` on `V_1 + V_{-1}`.
    pub n1: QMat,
    pub n: QMat,
    pub f: HodgeFiltration<Gaussian>,
    layout: Layout,
}

/// `diag(-1_a, 1_b)`.
pub fn j_ab(a: usize, b: usize) -> QMat {
    let d: Vec<Rational> = (0..a + b).map(|i| if i < a { int(-1) } else { int(1) }).collect();
    Mat::diag(&d)
}

fn set_block(m: &mut QMat, rows: usize, cols: usize, b: &QMat) {
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(rows + i, cols + j, b.get(i, j).clone());
        }
    }
}

fn block(m: &QMat, rows: usize, nr: usize, cols: usize, nc: usize) -> QMat {
    Mat::from_fn(nr, nc, |i, j| m.get(rows + i, cols + j).clone())
}

fn cx(v: &[Rational]) -> Vec<Gaussian> {
    v.iter().map(|x| Gaussian::from_rational(x.clone())).collect()
}

/// `x + i y`.
fn cx_pair(x: &[Rational], y: &[Rational]) -> Vec<Gaussian> {
    x.iter().zip(y).map(|(p, q)| gauss(p.clone(), q.clone())).collect()
}

fn conj_vec(v: &[Gaussian]) -> Vec<Gaussian> {
    v.iter().map(|z| z.conj()).collect()
}

/// Every leading principal minor is positive.
pub fn leading_minors_positive(g: &QMat) -> bool {
    (1..=g.rows()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        g.select(&idx, &idx).det().is_positive()
    })
}

pub fn build_model(a: usize, b: usize, c: usize, d: usize) -> Result<Weight2Model, Error> {
    let dims = Dims { a, b, c, d };
    if dims.dim() == 0 {
        return Err(Error::Precondition("all model dimensions are zero".into()));
    }
    let l = Layout::new(dims);
    let m = l.end;
    let mut q = Mat::zeros(m, m);
    let half = rat(1, 2);
    for s in 0..a {
        q.set(l.e + s, l.nne + s, int(1));
        q.set(l.nne + s, l.e + s, int(1));
        q.set(l.ne + s, l.ne + s, int(-1));
    }
    for j in 0..b {
        q.set(l.f + j, l.f + j, int(1));
    }
    for s in 0..c {
        q.set(l.u + s, l.nv + s, half.clone());
        q.set(l.nv + s, l.u + s, half.clone());
        q.set(l.v + s, l.nu + s, -half.clone());
        q.set(l.nu + s, l.v + s, -half.clone());
    }
    for s in 0..d {
        q.set(l.x + s, l.x + s, -half.clone());
        q.set(l.y + s, l.y + s, -half.clone());
    }
    let mut basis = Vec::with_capacity(m);
    let mut push = |prefix: &str, k: usize| basis.extend((1..=k).map(|i| format!("{prefix}{i}")));
    push("e", a);
    push("Ne", a);
    push("f", b);
    push("NNe", a);
    push("u", c);
    push("v", c);
    push("Nu", c);
    push("Nv", c);
    push("x", d);
    push("y", d);

    let mut model = Weight2Model {
        dims,
        basis,
        q,
        n0: Mat::zeros(m, m),
        n1: Mat::zeros(m, m),
        n: Mat::zeros(m, m),
        f: HodgeFiltration::from_steps(m, &[(0, Subspace::full(m))])?,
        layout: l,
    };
    let y0 = Mat::from_fn(a + b, a, |i, j| if i == j { int(1) } else { int(0) });
    model.n0 = model.element(&Mat::zeros(c, c), &y0)?;
    model.n1 = model.element(&Mat::identity(c), &Mat::zeros(a + b, a))?;
    model.n = &model.n0 + &model.n1;

    let e = |k: usize| unit_vec::<Rational>(m, k);
    let mut f2 = Vec::new();
    let mut f1 = Vec::new();
    for s in 0..a {
        f2.push(cx(&e(l.e + s)));
        f1.push(cx(&e(l.ne + s)));
    }
    for j in 0..b {
        f1.push(cx(&e(l.f + j)));
    }
    for s in 0..c {
        f2.push(cx_pair(&e(l.u + s), &e(l.v + s)));
        f1.push(cx_pair(&e(l.u + s), &scale_vec(&int(-1), &e(l.v + s))));
        f1.push(cx_pair(&e(l.nu + s), &e(l.nv + s)));
    }
    for s in 0..d {
        f2.push(cx_pair(&e(l.x + s), &e(l.y + s)));
    }
    f1.extend(f2.iter().cloned());
    model.f = HodgeFiltration::from_steps(
        m,
        &[(2, Subspace::span(m, &f2)), (1, Subspace::span(m, &f1)), (0, Subspace::full(m))],
    )?;
    Ok(model)
}

impl Weight2Model {
    pub fn dim(&self) -> usize {
        self.layout.end
    }

    /// The element of `g^{-1,-1}` with coordinates `(X, Y)`: `X` a symmetric
    /// `c x c` matrix acting `u_s -> X_rs Nu_r`, `v_s -> X_rs Nv_r`, and `Y` an
    /// `(a+b) x a` matrix acting `e_s -> Y_rs (Ne, f)_r` followed by
    /// `-Y^T J` from `(Ne, f)` to `NNe`.
    pub fn element(&self, x: &QMat, y: &QMat) -> Result<QMat, Error> {
        let Dims { a, b, c, .. } = self.dims;
        if x.rows() != c || x.cols() != c {
            return Err(Error::Dimension(format!("X must be {c} x {c}")));
        }
        if y.rows() != a + b || y.cols() != a {
            return Err(Error::Dimension(format!("Y must be {} x {a}", a + b)));
        }
        if !is_symmetric(x) {
            return Err(Error::Precondition("X must be symmetric".into()));
        }
        let l = self.layout;
        let mut t = Mat::zeros(l.end, l.end);
        set_block(&mut t, l.ne, l.e, y);
        set_block(&mut t, l.nne, l.ne, &-&(&y.transpose() * &j_ab(a, b)));
        set_block(&mut t, l.nu, l.u, x);
        set_block(&mut t, l.nv, l.v, x);
        Ok(t)
    }

    /// Inverse of [`Weight2Model::element`].
    pub fn coordinates(&self, t: &QMat) -> Result<(QMat, QMat), Error> {
        let Dims { a, b, c, .. } = self.dims;
        let l = self.layout;
        if t.rows() != l.end || t.cols() != l.end {
            return Err(Error::Dimension("operator size does not match the model".into()));
        }
        let x = block(t, l.nu, c, l.u, c);
        let y = block(t, l.ne, a + b, l.e, a);
        match self.element(&x, &y) {
            Ok(back) if back == *t => Ok((x, y)),
            _ => Err(Error::Precondition("operator is not in g^{-1,-1} of the model".into())),
        }
    }

    /// The named Hodge piece `V^{p,q}`.
    pub fn piece(&self, p: i64, q: i64) -> Subspace<Gaussian> {
        let l = self.layout;
        let Dims { a, b, c, d } = self.dims;
        let m = l.end;
        let e = |k: usize| unit_vec::<Rational>(m, k);
        let vs: Vec<Vec<Gaussian>> = match (p, q) {
            (2, 2) => (0..a).map(|s| cx(&e(l.e + s))).collect(),
            (1, 1) => (0..a).map(|s| cx(&e(l.ne + s))).chain((0..b).map(|j| cx(&e(l.f + j)))).collect(),
            (0, 0) => (0..a).map(|s| cx(&e(l.nne + s))).collect(),
            (2, 1) => (0..c).map(|s| cx_pair(&e(l.u + s), &e(l.v + s))).collect(),
            (1, 2) => (0..c).map(|s| cx_pair(&e(l.u + s), &scale_vec(&int(-1), &e(l.v + s)))).collect(),
            (1, 0) => (0..c).map(|s| cx_pair(&e(l.nu + s), &e(l.nv + s))).collect(),
            (0, 1) => (0..c).map(|s| cx_pair(&e(l.nu + s), &scale_vec(&int(-1), &e(l.nv + s)))).collect(),
            (2, 0) => (0..d).map(|s| cx_pair(&e(l.x + s), &e(l.y + s))).collect(),
            (0, 2) => (0..d).map(|s| cx_pair(&e(l.x + s), &scale_vec(&int(-1), &e(l.y + s)))).collect(),
            _ => Vec::new(),
        };
        Subspace::span(m, &vs)
    }

    pub fn frame(&self) -> Result<SplitFrame, Error> {
        SplitFrame::new(&self.q, &self.n, &self.f)
    }

    /// The pairing identities of the basis, one item each.
    pub fn check_pairings(&self) -> Report {
        let mut rep = Report::new();
        let l = self.layout;
        let Dims { a, b, c, d } = self.dims;
        let q = &self.q;
        let at = |i: usize, j: usize| q.get(i, j).clone();
        let delta = |s: usize, t: usize, v: Rational| if s == t { v } else { int(0) };
        let half = rat(1, 2);
        let mut expect: Vec<(&str, usize, usize, Rational)> = Vec::new();
        for s in 0..a {
            for t in 0..a {
                expect.push(("Q(e_s, NNe_t) = delta", l.e + s, l.nne + t, delta(s, t, int(1))));
                expect.push(("Q(Ne_s, Ne_t) = -delta", l.ne + s, l.ne + t, delta(s, t, int(-1))));
                expect.push(("Q(e_s, e_t) = 0", l.e + s, l.e + t, int(0)));
            }
            for j in 0..b {
                expect.push(("Q(Ne_s, f_j) = 0", l.ne + s, l.f + j, int(0)));
            }
        }
        for j in 0..b {
            for k in 0..b {
                expect.push(("Q(f_j, f_k) = delta", l.f + j, l.f + k, delta(j, k, int(1))));
            }
        }
        for s in 0..c {
            for t in 0..c {
                expect.push(("Q(u_s, Nv_t) = delta/2", l.u + s, l.nv + t, delta(s, t, half.clone())));
                expect.push(("Q(v_s, Nu_t) = -delta/2", l.v + s, l.nu + t, delta(s, t, -half.clone())));
                for (i, j) in [(l.u, l.u), (l.u, l.v), (l.v, l.v), (l.nu, l.nu), (l.nu, l.nv), (l.nv, l.nv)] {
                    expect.push(("V_1 isotropy", i + s, j + t, int(0)));
                }
                expect.push(("Q(u_s, Nu_t) = 0", l.u + s, l.nu + t, int(0)));
                expect.push(("Q(v_s, Nv_t) = 0", l.v + s, l.nv + t, int(0)));
            }
        }
        for s in 0..d {
            for t in 0..d {
                expect.push(("Q(x_s, x_t) = -delta/2", l.x + s, l.x + t, delta(s, t, -half.clone())));
                expect.push(("Q(y_s, y_t) = -delta/2", l.y + s, l.y + t, delta(s, t, -half.clone())));
                expect.push(("Q(x_s, y_t) = 0", l.x + s, l.y + t, int(0)));
            }
        }
        for (name, i, j, v) in expect {
            rep.require(name, at(i, j) == v, || format!("Q({}, {}) = {}", self.basis[i], self.basis[j], at(i, j)));
        }
        let blocks = [l.v0(), l.v1(), l.v2()];
        let mut cross = true;
        for (x, bx) in blocks.iter().enumerate() {
            for by in &blocks[x + 1..] {
                cross &= bx.iter().all(|&i| by.iter().all(|&j| at(i, j).is_zero()));
            }
        }
        rep.require("blocks are orthogonal", cross, || "V_0, V_1, V_2 are not orthogonal".into());
        let v0 = l.v0();
        let q0 = q.select(&v0, &v0);
        let mut expect0 = Mat::zeros(v0.len(), v0.len());
        set_block(&mut expect0, 0, 2 * a + b, &Mat::identity(a));
        set_block(&mut expect0, 2 * a + b, 0, &Mat::identity(a));
        set_block(&mut expect0, a, a, &j_ab(a, b));
        rep.require("Q on V_0 is the block form", q0 == expect0, || "unexpected Q on V_0".into());
        rep
    }

    /// Restrictions of `g` to `V_0`, `V_1 + V_{-1}` and `V_2 + V_{-2}`, when
    /// `g` is an isometry preserving those real subspaces and `V_1`.
    pub fn m_blocks(&self, g: &QMat) -> Result<[QMat; 3], Error> {
        let l = self.layout;
        self.require_isometry(g)?;
        let parts = [l.v0(), l.v1(), l.v2()];
        for (i, pi) in parts.iter().enumerate() {
            for (j, pj) in parts.iter().enumerate() {
                if i != j && pj.iter().any(|&r| pi.iter().any(|&s| !g.get(r, s).is_zero())) {
                    return Err(Error::Precondition("g does not preserve the V_m".into()));
                }
            }
        }
        let v1 = self.piece(2, 1).sum(&self.piece(1, 0));
        if !v1.image(&g.complexify()).is_subspace_of(&v1) {
            return Err(Error::Precondition("g does not preserve V_1".into()));
        }
        Ok([g.select(&parts[0], &parts[0]), g.select(&parts[1], &parts[1]), g.select(&parts[2], &parts[2])])
    }

    fn require_isometry(&self, g: &QMat) -> Result<(), Error> {
        if g.rows() != self.dim() || g.cols() != self.dim() {
            return Err(Error::Dimension("operator size does not match the model".into()));
        }
        if &(&g.transpose() * &self.q) * g != self.q {
            return Err(Error::Precondition("g is not an isometry of Q".into()));
        }
        Ok(())
    }

    /// The matrix of a Levi element in the model basis.
    pub fn levi_matrix(&self, g: &LeviElement) -> Result<QMat, Error> {
        g.check(self.dims)?;
        let l = self.layout;
        let Dims { a, c, d, .. } = self.dims;
        let mut m = Mat::zeros(l.end, l.end);
        let e1inv = g.e1.inverse().expect("checked invertible");
        set_block(&mut m, l.e, l.e, &e1inv);
        set_block(&mut m, l.ne, l.ne, &g.e2);
        set_block(&mut m, l.nne, l.nne, &g.e1.transpose());
        let dti = g.d.transpose().inverse().expect("checked invertible");
        set_block(&mut m, l.u, l.u, &dti);
        set_block(&mut m, l.v, l.v, &dti);
        set_block(&mut m, l.nu, l.nu, &g.d);
        set_block(&mut m, l.nv, l.nv, &g.d);
        set_block(&mut m, l.x, l.x, &g.o);
        set_block(&mut m, l.y, l.y, &g.o);
        let _ = (a, c, d);
        Ok(m)
    }

    /// Recover `(D; E1, E2; O)` from a matrix of the Levi block form.
    pub fn levi_decompose(&self, g: &QMat) -> Result<LeviElement, Error> {
        self.require_isometry(g)?;
        let l = self.layout;
        let Dims { a, b, c, d } = self.dims;
        let e1inv = block(g, l.e, a, l.e, a);
        let Some(e1) = e1inv.inverse() else {
            return Err(Error::Precondition("g is not a Levi element of the model".into()));
        };
        let cand = LeviElement {
            d: block(g, l.nu, c, l.nu, c),
            e1,
            e2: block(g, l.ne, a + b, l.ne, a + b),
            o: block(g, l.x, d, l.x, d),
        };
        match self.levi_matrix(&cand) {
            Ok(back) if back == *g => Ok(cand),
            _ => Err(Error::Precondition("g is not a Levi element of the model".into())),
        }
    }

    /// `dim g^{p,p} ∩ so(V_0)` for `p = -2..=2`, over the real points.
    pub fn v0_factor_dims(&self) -> BTreeMap<i64, usize> {
        (-2..=2).map(|p| (p, self.v0_factor_basis(p).len())).collect()
    }

    /// A basis of the infinitesimal isometries supported on `V_0` that shift
    /// the bigrading by `(p, p)`.
    pub fn v0_factor_basis(&self, p: i64) -> Vec<QMat> {
        let l = self.layout;
        let Dims { a, b, .. } = self.dims;
        let level = |i: usize| -> i64 {
            if i < l.ne {
                2
            } else if i < l.nne {
                1
            } else {
                0
            }
        };
        let idx = l.v0();
        let m = l.end;
        let support: Vec<(usize, usize)> = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| level(i) == level(j) + p)
            .collect();
        if support.is_empty() || a + b == 0 {
            return Vec::new();
        }
        let ops: Vec<QMat> = support
            .iter()
            .map(|&(i, j)| {
                let mut t = Mat::zeros(m, m);
                t.set(i, j, int(1));
                t
            })
            .collect();
        let cols: Vec<Vec<Rational>> = ops.iter().map(|t| (&(&t.transpose() * &self.q) + &(&self.q * t)).to_vec()).collect();
        let sys = Mat::from_cols(m * m, &cols);
        sys.kernel()
            .into_iter()
            .map(|k| ops.iter().zip(&k).fold(Mat::zeros(m, m), |acc, (t, x)| &acc + &t.scale(x)))
            .collect()
    }

    /// `so(V_0) ∩ g^{-1,-1}` is abelian.
    pub fn is_hermitian_factor(&self) -> bool {
        let basis = self.v0_factor_basis(-1);
        basis.iter().enumerate().all(|(i, x)| basis[i + 1..].iter().all(|y| Mat::commutator(x, y).is_zero()))
    }

    /// `dim so(V_0) ∩ g^{2,2} = 1` and nothing beyond.
    pub fn is_contact_factor(&self) -> bool {
        let dims = self.v0_factor_dims();
        dims[&2] == 1 && self.v0_factor_basis(3).is_empty()
    }

    /// The form `nu` with `[x, y] = nu(x, y) z` on `so(V_0) ∩ g^{-1,-1}`, for
    /// a fixed generator `z` of `so(V_0) ∩ g^{-2,-2}`; `None` unless the
    /// factor is contact.
    pub fn contact_form(&self) -> Option<QMat> {
        if !self.is_contact_factor() {
            return None;
        }
        let z = self.v0_factor_basis(-2).pop()?;
        let basis = self.v0_factor_basis(-1);
        let (zi, zj) = (0..z.rows()).flat_map(|i| (0..z.cols()).map(move |j| (i, j))).find(|&(i, j)| !z.get(i, j).is_zero())?;
        let k = basis.len();
        let mut nu = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let br = Mat::commutator(&basis[i], &basis[j]);
                let c = br.get(zi, zj).clone() / z.get(zi, zj).clone();
                if br != z.scale(&c) {
                    return None;
                }
                nu.set(i, j, c);
            }
        }
        Some(nu)
    }
}

/// `(D; E1, E2; O)`: `D` in `GL(c)`, `E1` in `GL(a)`, `E2` preserving
/// `diag(-1_a, 1_b)`, `O` orthogonal of size `d`.
#[derive(Clone, PartialEq, Debug)]
pub struct LeviElement {
    pub d: QMat,
    pub e1: QMat,
    pub e2: QMat,
    pub o: QMat,
}

impl LeviElement {
    pub fn identity(k: Dims) -> Self {
        LeviElement {
            d: Mat::identity(k.c),
            e1: Mat::identity(k.a),
            e2: Mat::identity(k.a + k.b),
            o: Mat::identity(k.d),
        }
    }

    pub fn check(&self, k: Dims) -> Result<(), Error> {
        let shape = |m: &QMat, n: usize, what: &str| {
            if m.rows() != n || m.cols() != n {
                Err(Error::Dimension(format!("{what} must be {n} x {n}")))
            } else {
                Ok(())
            }
        };
        shape(&self.d, k.c, "D")?;
        shape(&self.e1, k.a, "E1")?;
        shape(&self.e2, k.a + k.b, "E2")?;
        shape(&self.o, k.d, "O")?;
        if self.d.inverse().is_none() || self.e1.inverse().is_none() {
            return Err(Error::Precondition("D and E1 must be invertible".into()));
        }
        let j = j_ab(k.a, k.b);
        if &(&self.e2.transpose() * &j) * &self.e2 != j {
            return Err(Error::Precondition("E2 does not preserve diag(-1_a, 1_b)".into()));
        }
        if &self.o.transpose() * &self.o != Mat::identity(k.d) {
            return Err(Error::Precondition("O is not orthogonal".into()));
        }
        Ok(())
    }

    /// `(X, Y) -> (D X D^T, E2 Y E1)`.
    pub fn act(&self, x: &QMat, y: &QMat) -> (QMat, QMat) {
        (&(&self.d * x) * &self.d.transpose(), &(&self.e2 * y) * &self.e1)
    }

    /// In the identity component: `det E1 > 0`, and `E2` has positive
    /// determinant on both diagonal blocks.
    pub fn is_identity_component(&self, a: usize) -> bool {
        let n = self.e2.rows();
        let top: Vec<usize> = (0..a).collect();
        let bot: Vec<usize> = (a..n).collect();
        self.e1.det().is_positive()
            && self.e2.select(&top, &top).det().is_positive()
            && self.e2.select(&bot, &bot).det().is_positive()
            && self.d.det().is_positive()
    }
}

/// Membership of `(X, Y)` in the open orbits `𝒳` and `𝒴`, and in the
/// component of `𝒴` containing `(1_a; 0)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Membership {
    pub x: bool,
    pub y: bool,
    pub y_component: bool,
}

impl Membership {
    pub fn in_orbit(&self) -> bool {
        self.x && self.y && self.y_component
    }
}

/// `X` positive definite by leading minors; `alpha^T alpha - beta^T beta`
/// positive definite with `Y = (alpha; beta)`, and `det alpha > 0`.
pub fn orbit_membership(x: &QMat, y: &QMat, a: usize) -> Result<Membership, Error> {
    if !x.is_square() || !is_symmetric(x) {
        return Err(Error::Dimension("X must be square symmetric".into()));
    }
    if y.cols() != a || y.rows() < a {
        return Err(Error::Dimension(format!("Y must have {a} columns and at least {a} rows")));
    }
    let in_x = leading_minors_positive(x);
    let g = &(&y.transpose() * &j_ab(a, y.rows() - a)) * y;
    let in_y = leading_minors_positive(&-&g);
    let top: Vec<usize> = (0..a).collect();
    let alpha = y.select(&top, &top);
    Ok(Membership { x: in_x, y: in_y, y_component: in_y && alpha.det().is_positive() })
}

/// A split polarized limit `(F, N)` of weight 2 with the real basis of
/// `I^{2,2}` and a basis of `I^{2,1}` used by the orbit tests.
#[derive(Clone, Debug)]
pub struct SplitFrame {
    pub q: QMat,
    pub n: QMat,
    pub f: HodgeFiltration<Gaussian>,
    pub w: Filtration<Rational>,
    pub bigrading: Bigrading,
    pub p22: Vec<Vec<Rational>>,
    pub p21: Vec<Vec<Gaussian>>,
}

fn real_basis(s: &Subspace<Gaussian>) -> QSubspace {
    let mut vs = Vec::new();
    for v in s.basis() {
        vs.push(v.iter().map(|z| z.real_part()).collect::<Vec<_>>());
        vs.push(v.iter().map(|z| z.imag_part()).collect::<Vec<_>>());
    }
    Subspace::span(s.ambient(), &vs)
}

impl SplitFrame {
    pub fn new(q: &QMat, n: &QMat, f: &HodgeFiltration<Gaussian>) -> Result<Self, Error> {
        check_form(n, q, 2)?;
        let w = monodromy_filtration(n, 2)?;
        let bigrading = deligne_bigrading(f, &w)?;
        if !bigrading.is_real_split() {
            return Err(Error::Unsupported("non-split input".into()));
        }
        if bigrading.pieces.iter().any(|(&(p, q), s)| !s.is_zero() && (p + q > 4 || p < 0 || q < 0 || p > 2 || q > 2)) {
            return Err(Error::Precondition("not an effective weight-2 limit".into()));
        }
        let p22 = real_basis(&bigrading.piece(2, 2)).basis().to_vec();
        let p21 = bigrading.piece(2, 1).basis().to_vec();
        Ok(SplitFrame { q: q.clone(), n: n.clone(), f: f.clone(), w, bigrading, p22, p21 })
    }

    pub fn dims(&self) -> Dims {
        let a = self.p22.len();
        let c = self.p21.len();
        Dims { a, b: self.bigrading.piece(1, 1).dim() - a, c, d: self.bigrading.piece(2, 0).dim() }
    }

    pub fn dim(&self) -> usize {
        self.q.rows()
    }

    /// Real, an infinitesimal isometry, and of type `(-1, -1)`.
    pub fn in_g11(&self, t: &QMat) -> bool {
        if t.rows() != self.dim() || !(&(&t.transpose() * &self.q) + &(&self.q * t)).is_zero() {
            return false;
        }
        let tc = t.complexify();
        self.bigrading
            .pieces
            .iter()
            .all(|(&(p, q), s)| s.image(&tc).is_subspace_of(&self.bigrading.piece(p - 1, q - 1)))
    }

    /// Orbit tests for `t` of type `(-1, -1)`: `i Q(u, T conj u) > 0` on
    /// `I^{2,1}`, `Q(u, T^2 u) > 0` on real `I^{2,2}`, and the orientation of
    /// the `N e -> T e` block.
    pub fn membership(&self, t: &QMat) -> Membership {
        let tc = t.complexify();
        let qc = self.q.complexify();
        let i = imag_unit();
        let k = self.p21.len();
        let h: GMat = Mat::from_fn(k, k, |r, s| {
            i.clone() * dot(&self.p21[r], &qc.apply(&tc.apply(&conj_vec(&self.p21[s]))))
        });
        let in_x = k == 0 || (h == h.conj_transpose() && is_positive_definite(&h));
        let t2 = t * t;
        let g = gram(&(&self.q * &t2), &self.p22);
        let in_y = is_symmetric(&g) && (self.p22.is_empty() || is_positive_definite(&g));
        let ne: Vec<Vec<Rational>> = self.p22.iter().map(|e| self.n.apply(e)).collect();
        let g0 = gram(&self.q, &ne);
        let a = ne.len();
        let rhs = Mat::from_fn(a, a, |r, s| dot(&ne[r], &self.q.apply(&t.apply(&self.p22[s]))));
        let alpha = match g0.inverse() {
            Some(inv) => &inv * &rhs,
            None => Mat::zeros(a, a),
        };
        Membership { x: in_x, y: in_y, y_component: in_y && alpha.det().is_positive() }
    }
}

fn perp(q: &QMat, s: &QSubspace) -> QSubspace {
    if s.is_zero() {
        return Subspace::full(q.rows());
    }
    let rows: Vec<Vec<Rational>> = s.basis().iter().map(|b| q.transpose().apply(b)).collect();
    let m = Mat::from_rows(rows).expect("rows of equal length");
    Subspace::span(q.rows(), &m.kernel())
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// A vector `v` in the span of `cands` with `b(v, v) != 0`, if any.
fn anisotropic(cands: &[Vec<Rational>], b: impl Fn(&[Rational], &[Rational]) -> Rational) -> Option<Vec<Rational>> {
    if let Some(v) = cands.iter().find(|v| !b(v, v).is_zero()) {
        return Some(v.clone());
    }
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let s = add_vec(&cands[i], &cands[j]);
            if !b(&s, &s).is_zero() {
                return Some(s);
            }
        }
    }
    None
}

/// Build a split polarized limit `F` for `(N, Q)` with `Q` symmetric and
/// `N^3 = 0`, from `Q`-orthogonal strings with isotropic tops. If a grading
/// `y` is given (`Q`-skew, `[y, N] = -2N`, grading `W(N)` centered at 0), the
/// limit is chosen with weight grading `y + 2`.
pub fn split_frame(n: &QMat, q: &QMat, y: Option<&QMat>) -> Result<SplitFrame, Error> {
    check_form(n, q, 2)?;
    let dim = q.rows();
    if !n.pow(3).is_zero() {
        return Err(Error::Unsupported("strings longer than 3 do not occur in weight 2".into()));
    }
    let grading = match y {
        Some(y) => {
            if !(&(&y.transpose() * q) + &(q * y)).is_zero() || Mat::commutator(y, n) != n.scale(&int(-2)) {
                return Err(Error::Precondition("grading must be Q-skew with [Y, N] = -2N".into()));
            }
            let g = Grading::from_matrix(y)?;
            if !g.grades(&monodromy_filtration(n, 0)?) {
                return Err(Error::Precondition("Y does not grade W(N)".into()));
            }
            Some(g)
        }
        None => None,
    };
    let within = |cur: &QSubspace, k: i64| -> Vec<Vec<Rational>> {
        match &grading {
            Some(g) => cur.intersect(&g.eigenspace(k)).basis().to_vec(),
            None => cur.basis().to_vec(),
        }
    };
    let qf = |x: &[Rational], z: &[Rational]| dot(x, &q.apply(z));
    let n2 = n.pow(2);
    let mut cur: QSubspace = Subspace::full(dim);
    let mut tops = Vec::new();
    while let Some(mut v) = anisotropic(&within(&cur, 2), |x, z| qf(x, &n2.apply(z))) {
        let g = qf(&v, &n2.apply(&v));
        if !g.is_positive() {
            return Err(Error::Precondition("Q(v, N^2 v) < 0 on a length-3 string: not polarized".into()));
        }
        let c = -qf(&v, &v) / (int(2) * g);
        v = add_vec(&v, &scale_vec(&c, &n2.apply(&v)));
        let s = Subspace::span(dim, &[v.clone(), n.apply(&v), n2.apply(&v)]);
        cur = cur.intersect(&perp(q, &s));
        tops.push(v);
    }
    if !cur.image(&n2).is_zero() {
        return Err(Error::Precondition("Q degenerate on the length-3 strings".into()));
    }
    let mut pairs = Vec::new();
    loop {
        let cands = within(&cur, 1);
        let om = |x: &[Rational], z: &[Rational]| qf(x, &n.apply(z));
        let mut found = None;
        'outer: for i in 0..cands.len() {
            for j in 0..cands.len() {
                if !om(&cands[i], &cands[j]).is_zero() {
                    found = Some((cands[i].clone(), cands[j].clone()));
                    break 'outer;
                }
            }
        }
        let Some((mut x, mut z)) = found else { break };
        let w = om(&x, &z);
        let two = int(2);
        let al = -qf(&x, &x) / (two.clone() * w.clone());
        x = add_vec(&x, &scale_vec(&al, &n.apply(&z)));
        let be = qf(&z, &z) / (two.clone() * w.clone());
        z = add_vec(&z, &scale_vec(&be, &n.apply(&x)));
        let ga = -qf(&x, &z) / w.clone();
        z = add_vec(&z, &scale_vec(&ga, &n.apply(&z)));
        z = scale_vec(&(int(1) / (two * w)), &z);
        let s = Subspace::span(dim, &[x.clone(), z.clone(), n.apply(&x), n.apply(&z)]);
        cur = cur.intersect(&perp(q, &s));
        pairs.push((x, z));
    }
    if !cur.image(n).is_zero() {
        return Err(Error::Precondition("Q degenerate on the length-2 strings".into()));
    }
    let rest = cur.basis().to_vec();
    let qr = gram(q, &rest);
    let (_, p, diag) = diagonalize(&qr);
    let mut pos = Vec::new();
    let mut neg: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (k, r) in diag.iter().enumerate() {
        let v = rest.iter().enumerate().fold(vec![int(0); dim], |acc, (i, b)| add_vec(&acc, &scale_vec(p.get(i, k), b)));
        if r.is_positive() {
            pos.push(v);
        } else if r.is_negative() {
            neg.push((v, r.clone()));
        } else {
            return Err(Error::Precondition("Q degenerate on ker N".into()));
        }
    }
    let mut planes = Vec::new();
    while let Some((x, rx)) = neg.pop() {
        let Some(k) = neg.iter().position(|(_, ry)| rational_sqrt(&(rx.clone() / ry.clone())).is_some()) else {
            return Err(Error::Unsupported("no rational complex structure on the negative part of ker N".into()));
        };
        let (y, ry) = neg.remove(k);
        let s = rational_sqrt(&(rx / ry)).expect("checked square");
        planes.push((x, scale_vec(&s, &y)));
    }
    let mut f2: Vec<Vec<Gaussian>> = Vec::new();
    let mut f1: Vec<Vec<Gaussian>> = Vec::new();
    for v in &tops {
        f2.push(cx(v));
        f1.push(cx(&n.apply(v)));
    }
    for v in &pos {
        f1.push(cx(v));
    }
    for (x, z) in &pairs {
        let w = cx_pair(x, z);
        f1.push(conj_vec(&w));
        f1.push(n.complexify().apply(&w));
        f2.push(w);
    }
    for (x, z) in &planes {
        f2.push(cx_pair(x, z));
    }
    f1.extend(f2.iter().cloned());
    let f = HodgeFiltration::from_steps(
        dim,
        &[(2, Subspace::span(dim, &f2)), (1, Subspace::span(dim, &f1)), (0, Subspace::full(dim))],
    )?;
    SplitFrame::new(q, n, &f)
}

/// How the names of the five types are attached to `(a, c, d)`.
pub const TYPE_LABELS: &str =
    "types II = (1,0,1) and V = (2,0,0) are fixed; I = (0,1,1), III = (0,2,0), IV = (1,1,0) are read off the closure order";

/// The five split polarized limits on a domain with `h^{2,0} = 2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum H2Type {
    I,
    II,
    III,
    IV,
    V,
}

impl fmt::Display for H2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            H2Type::I => "I",
            H2Type::II => "II",
            H2Type::III => "III",
            H2Type::IV => "IV",
            H2Type::V => "V",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for H2Type {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        H2Type::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown type {s}")))
    }
}

impl H2Type {
    pub const ALL: [H2Type; 5] = [H2Type::I, H2Type::II, H2Type::III, H2Type::IV, H2Type::V];

    /// `(dim I^{2,2}, dim I^{2,1}, dim I^{2,0})`.
    pub fn acd(self) -> (usize, usize, usize) {
        match self {
            H2Type::I => (0, 1, 1),
            H2Type::II => (1, 0, 1),
            H2Type::III => (0, 2, 0),
            H2Type::IV => (1, 1, 0),
            H2Type::V => (2, 0, 0),
        }
    }

    pub fn from_acd(acd: (usize, usize, usize)) -> Option<H2Type> {
        H2Type::ALL.into_iter().find(|t| t.acd() == acd)
    }

    pub fn dims(self, h11: usize) -> Result<Dims, Error> {
        let (a, c, d) = self.acd();
        if h11 < a + 2 * c {
            return Err(Error::Precondition(format!("type {self} needs h^(1,1) >= {}", a + 2 * c)));
        }
        Ok(Dims { a, b: h11 - a - 2 * c, c, d })
    }

    /// Signed diagram of the polarizing `N`, read off the diamond.
    pub fn diagram(self, h11: usize) -> Result<SignedDiagram, Error> {
        let k = self.dims(h11)?;
        let m = build_model(k.a, k.b, k.c, k.d)?;
        chromosome(&diamond_of(&m.f, &m.n, 2)?)
    }

    /// The closure order `I < {II, III} < IV < V`.
    pub fn leq(self, other: H2Type) -> bool {
        use H2Type::*;
        self == other
            || matches!((self, other), (I, _) | (II, IV) | (II, V) | (III, IV) | (III, V) | (IV, V))
    }
}

/// Type of a nilpotent infinitesimal isometry of a symmetric form of
/// signature `(m - 4, 4)`, by the dimensions of `I^{2,2}`, `I^{2,1}`, `I^{2,0}`
/// of the limit; the signed diagram must be that of a polarized limit.
pub fn classify_h2x2_type(n: &QMat, q: &QMat) -> Result<H2Type, Error> {
    check_form(n, q, 2)?;
    let sig = signature(q)?;
    if sig.zero != 0 || sig.neg != 4 {
        return Err(Error::Precondition("not an h = (2, *, 2) configuration: Q must have signature (m - 4, 4)".into()));
    }
    let p = partition_of(n)?;
    if p.parts().iter().any(|&k| k > 3) {
        return Err(Error::Precondition("strings longer than 3 do not occur in weight 2".into()));
    }
    let (a, twoc) = (p.multiplicity(3), p.multiplicity(2));
    if twoc % 2 != 0 || a + twoc / 2 > 2 {
        return Err(Error::Precondition(format!("Jordan type {:?} is not of a weight-2 degeneration", p.parts())));
    }
    let c = twoc / 2;
    let Some(t) = H2Type::from_acd((a, c, 2 - a - c)) else {
        return Err(Error::Precondition("N = 0 has no degeneration type".into()));
    };
    let expect = t.diagram(sig.pos)?;
    let got = signed_diagram_of(n, q, 2)?;
    if got != expect {
        return Err(Error::Precondition(format!("{got} is not the diagram of a polarized limit of type {t} ({expect})")));
    }
    Ok(t)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MaxConeDim {
    Exact(usize),
    /// `a > 2`: not given by a closed formula here.
    Unresolved,
}

pub fn max_cone_dim(k: Dims) -> MaxConeDim {
    let x1 = k.c * (k.c + 1) / 2;
    match k.a {
        0 | 1 => MaxConeDim::Exact(k.a * (k.a + k.b) + x1),
        2 => MaxConeDim::Exact(2 + k.b + x1),
        _ => MaxConeDim::Unresolved,
    }
}

/// `c + min(2a, a + b)`, bounding the number of commuting `sl2`s in a cone.
pub fn real_rank_bound(a: usize, b: usize, c: usize) -> usize {
    c + (2 * a).min(a + b)
}

/// Which types may occur on faces of a cone of a given type, and how large
/// faces of each type may be.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FaceConstraints {
    pub cone_type: H2Type,
    pub allowed: Vec<H2Type>,
    pub max_dim: BTreeMap<H2Type, usize>,
}

pub fn face_constraints(t: H2Type, h11: usize) -> FaceConstraints {
    let allowed: Vec<H2Type> = H2Type::ALL.into_iter().filter(|s| s.leq(t)).collect();
    let max_dim = allowed
        .iter()
        .filter_map(|&s| match max_cone_dim(s.dims(h11).ok()?) {
            MaxConeDim::Exact(n) => Some((s, n)),
            MaxConeDim::Unresolved => None,
        })
        .collect();
    FaceConstraints { cone_type: t, allowed, max_dim }
}

/// Check a table of `(face type, face dimension)` against the constraints of
/// the cone type.
pub fn check_face_table(cone_type: H2Type, faces: &[(H2Type, usize)], h11: usize) -> Report {
    let fc = face_constraints(cone_type, h11);
    let mut rep = Report::new();
    for &(t, dim) in faces {
        rep.require("face type", fc.allowed.contains(&t), || format!("type {t} face on a type {cone_type} cone"));
        let ok = fc.max_dim.get(&t).map_or(true, |&m| dim <= m);
        rep.require("face dimension", ok, || format!("type {t} face of dimension {dim}"));
    }
    if faces.is_empty() {
        rep.record("face type", Ok(()));
    }
    rep
}

/// `(X, Y)` coordinates of the generators of a cone in a model.
#[derive(Clone, PartialEq, Debug)]
pub struct ConeSpec {
    pub generators: Vec<(QMat, QMat)>,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ProbeRow {
    pub weights: Vec<String>,
    pub membership: Membership,
    pub diagram: String,
    pub same_w: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct FaceRow {
    pub generators: Vec<usize>,
    pub dim: usize,
    pub diagram: String,
    pub h2_type: Option<H2Type>,
    pub below_cone: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ConeReport {
    pub report: Report,
    pub dim: usize,
    pub max_dim: MaxConeDim,
    pub cone_type: Option<H2Type>,
    pub diagram: String,
    pub probes: Vec<ProbeRow>,
    pub faces: Vec<FaceRow>,
    /// Interior conditions hold on the probe set; never a proof over the
    /// whole open cone.
    pub status: &'static str,
    pub assumptions: Vec<String>,
}

impl ConeReport {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = json!(self.passed());
        v
    }
}

pub fn cone_check(model: &Weight2Model, cone: &ConeSpec, probes: &[Vec<Rational>]) -> Result<ConeReport, Error> {
    let gens: Vec<QMat> = cone.generators.iter().map(|(x, y)| model.element(x, y)).collect::<Result<_, _>>()?;
    cone_check_frame(&model.frame()?, &gens, probes)
}

fn lin_comb(gens: &[QMat], w: &[Rational]) -> QMat {
    let d = gens[0].rows();
    gens.iter().zip(w).fold(Mat::zeros(d, d), |acc, (g, c)| &acc + &g.scale(c))
}

/// Check that the positive span of `gens` underlies a nilpotent orbit at
/// the limit of `frame`, on the probe set: the barycenter, the barycenter
/// pushed towards each generator, and `probes` (positive weights).
pub fn cone_check_frame(frame: &SplitFrame, gens: &[QMat], probes: &[Vec<Rational>]) -> Result<ConeReport, Error> {
    if gens.is_empty() {
        return Err(Error::Precondition("a cone needs at least one generator".into()));
    }
    for (i, g) in gens.iter().enumerate() {
        if !frame.in_g11(g) {
            return Err(Error::Precondition(format!("generator {} is not in g^{{-1,-1}}", i + 1)));
        }
    }
    let k = gens.len();
    let mut rep = Report::new();
    let mut commute = true;
    for i in 0..k {
        for j in i + 1..k {
            commute &= Mat::commutator(&gens[i], &gens[j]).is_zero();
        }
    }
    rep.require("generators commute", commute, || "generators do not commute".into());

    let q = &frame.q;
    let h11 = signature(q)?.pos;
    let h2 = signature(q)?.neg == 4;
    let base_diagram = signed_diagram_of(&frame.n, q, 2)?;
    let cone_type = if h2 { classify_h2x2_type(&frame.n, q).ok() } else { None };

    let mut points: Vec<Vec<Rational>> = vec![vec![int(1); k]];
    for i in 0..k {
        let mut w = vec![int(1); k];
        w[i] = int(2);
        points.push(w);
    }
    for p in probes {
        if p.len() != k || !p.iter().all(|c| c.is_positive()) {
            return Err(Error::Precondition("probe weights must be positive, one per generator".into()));
        }
        points.push(p.clone());
    }
    let mut rows = Vec::new();
    for w in &points {
        let t = lin_comb(gens, w);
        let mem = frame.membership(&t);
        let diagram = signed_diagram_of(&t, q, 2)?;
        let same_w = monodromy_filtration(&t, 2)? == frame.w;
        let label = w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
        rep.require("interior in the orbit", mem.in_orbit(), || format!("probe ({label}) leaves the orbit: {mem:?}"));
        rep.require("interior diagram", diagram == base_diagram, || format!("probe ({label}) has diagram {diagram}"));
        rep.require("weight filtration constant", same_w, || format!("probe ({label}) changes W(N)"));
        rows.push(ProbeRow {
            weights: w.iter().map(|c| c.to_string()).collect(),
            membership: mem,
            diagram: diagram.to_string(),
            same_w,
        });
    }

    let mut faces = Vec::new();
    let mut table = Vec::new();
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<QMat> = idx.iter().map(|&i| gens[i].clone()).collect();
        let t = lin_comb(&sub, &vec![int(1); sub.len()]);
        let dim = Mat::from_cols(t.rows() * t.cols(), &sub.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).rank();
        let diagram = signed_diagram_of(&t, q, 2)?;
        let below = dokovic_leq(&diagram, &base_diagram);
        let ty = if h2 { classify_h2x2_type(&t, q).ok() } else { None };
        let generators: Vec<usize> = idx.iter().map(|i| i + 1).collect();
        rep.require("faces below the cone", below, || format!("face {generators:?} has diagram {diagram}"));
        if let (Some(_), Some(ft)) = (cone_type, ty) {
            table.push((ft, dim));
        }
        faces.push(FaceRow {
            generators,
            dim,
            diagram: diagram.to_string(),
            h2_type: ty,
            below_cone: below,
        });
    }
    if let Some(ct) = cone_type {
        let full = (1usize << k) - 1;
        rep.require("faces typed", table.len() == full, || "some faces have no weight-2 type".into());
        rep.extend(check_face_table(ct, &table, h11));
    }

    let all: Vec<Vec<Rational>> = gens.iter().map(|g| g.to_vec()).collect();
    let dim = Mat::from_cols(frame.dim() * frame.dim(), &all).rank();
    let max_dim = max_cone_dim(frame.dims());
    if let MaxConeDim::Exact(m) = max_dim {
        rep.require("dimension bound", dim <= m, || format!("cone of dimension {dim} exceeds {m}"));
    }
    Ok(ConeReport {
        report: rep,
        dim,
        max_dim,
        cone_type,
        diagram: base_diagram.to_string(),
        probes: rows,
        faces,
        status: "probed",
        assumptions: cone_type
            .map(|_| vec![TYPE_LABELS.to_string()])
            .unwrap_or_default(),
    })
}

/// `Q(e_j, e_k) = 1` iff `j + k = m + 1` (1-based).
pub fn root_form(m: usize) -> QMat {
    Mat::from_fn(m, m, |i, j| if i + j + 1 == m { int(1) } else { int(0) })
}

/// `e_j^k` maps `e_k` to `e_j` (1-based).
fn ejk(m: usize, j: usize, k: usize) -> QMat {
    let mut t = Mat::zeros(m, m);
    t.set(j - 1, k - 1, int(1));
    t
}

/// Raising and lowering root vectors of the root `alpha_i`, `i = 1..=4`.
pub fn root_vectors(m: usize, i: usize) -> Result<(QMat, QMat), Error> {
    if m < 8 {
        return Err(Error::Precondition("the four roots need m >= 8".into()));
    }
    let e = |j, k| ejk(m, j, k);
    let (pos, neg) = match i {
        1 => (&e(2, 3) - &e(m - 2, m - 1), &e(3, 2) - &e(m - 1, m - 2)),
        2 => (&e(1, 4) - &e(m - 3, m), &e(4, 1) - &e(m, m - 3)),
        3 => (&e(2, m - 2) - &e(3, m - 1), &e(m - 2, 2) - &e(m - 1, 3)),
        4 => (&e(1, m - 3) - &e(4, m), &e(m - 3, 1) - &e(m, 4)),
        _ => return Err(Error::Precondition(format!("root index {i} not in 1..=4"))),
    };
    Ok((pos, neg))
}

/// A root `sl2` with nilnegative `sign * X_{-alpha}`.
#[derive(Clone, PartialEq, Debug)]
pub struct RootSl2 {
    pub root: usize,
    pub sign: i64,
    pub triple: Sl2Triple<Rational>,
}

pub fn root_sl2(m: usize, i: usize, sign: i64) -> Result<RootSl2, Error> {
    let (p, n) = root_vectors(m, i)?;
    let s = int(sign);
    let triple = Sl2Triple { n_plus: p.scale(&s), y: Mat::commutator(&p, &n), n: n.scale(&s) };
    triple.check()?;
    Ok(RootSl2 { root: i, sign, triple })
}

fn subsets4() -> Vec<Vec<usize>> {
    (1u32..16).map(|mask| (1..=4).filter(|i| mask & (1 << (i - 1)) != 0).collect()).collect()
}

/// Signs `s_i` such that `sum_{i in S} s_i X_{-alpha_i}` is the nilnegative
/// of a polarized limit for every non-empty `S`; the first such choice in
/// lexicographic order with `+` before `-`.
pub fn root_signs(m: usize) -> Result<[i64; 4], Error> {
    let q = root_form(m);
    let negs: Vec<QMat> = (1..=4).map(|i| root_vectors(m, i).map(|r| r.1)).collect::<Result<_, _>>()?;
    for mask in 0u32..16 {
        let signs: [i64; 4] = std::array::from_fn(|i| if mask & (1 << (3 - i)) != 0 { -1 } else { 1 });
        let ok = subsets4().iter().all(|s| {
            let n = s.iter().fold(Mat::zeros(m, m), |acc, &i| &acc + &negs[i - 1].scale(&int(signs[i - 1])));
            classify_h2x2_type(&n, &q).is_ok()
        });
        if ok {
            return Ok(signs);
        }
    }
    Err(Error::Precondition("no sign choice polarizes every subset".into()))
}

#[derive(Clone, PartialEq, Debug)]
pub struct RootSl2s {
    pub m: usize,
    pub q: QMat,
    pub sl2s: Vec<RootSl2>,
    /// `sum s_i X_{-alpha_i}` over the subset.
    pub nilnegative: QMat,
    /// `sum Y_i`.
    pub grading: QMat,
    pub h2_type: H2Type,
}

impl RootSl2s {
    pub fn pairwise_commute(&self) -> bool {
        let ms = |r: &RootSl2| [r.triple.n_plus.clone(), r.triple.y.clone(), r.triple.n.clone()];
        self.sl2s.iter().enumerate().all(|(i, a)| {
            self.sl2s[i + 1..]
                .iter()
                .all(|b| ms(a).iter().all(|x| ms(b).iter().all(|y| Mat::commutator(x, y).is_zero())))
        })
    }

    /// The split limit at the generic nilnegative, with weight grading
    /// `2 + sum Y_i`.
    pub fn frame(&self) -> Result<SplitFrame, Error> {
        split_frame(&self.nilnegative, &self.q, Some(&self.grading))
    }

    /// The cone spanned by the nilnegatives of the `sl2`s.
    pub fn cone_check(&self) -> Result<ConeReport, Error> {
        let gens: Vec<QMat> = self.sl2s.iter().map(|r| r.triple.n.clone()).collect();
        cone_check_frame(&self.frame()?, &gens, &[])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "roots": self.sl2s.iter().map(|r| r.root).collect::<Vec<_>>(),
            "signs": self.sl2s.iter().map(|r| r.sign).collect::<Vec<_>>(),
            "commute": self.pairwise_commute(),
            "nilnegative": mat_to_json(&self.nilnegative),
            "type": self.h2_type.to_string(),
        })
    }
}

pub fn build_root_sl2s(m: usize, subset: &[usize]) -> Result<RootSl2s, Error> {
    build_root_sl2s_with_signs(m, subset, root_signs(m)?)
}

/// As [`build_root_sl2s`] with the signs of [`root_signs`] supplied.
pub fn build_root_sl2s_with_signs(m: usize, subset: &[usize], signs: [i64; 4]) -> Result<RootSl2s, Error> {
    let mut roots = subset.to_vec();
    roots.sort_unstable();
    roots.dedup();
    if roots.is_empty() || roots.len() != subset.len() || roots.iter().any(|&i| !(1..=4).contains(&i)) {
        return Err(Error::Precondition("subset must be distinct roots among 1..=4".into()));
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::Precondition("root signs must be +1 or -1".into()));
    }
    let sl2s: Vec<RootSl2> = roots.iter().map(|&i| root_sl2(m, i, signs[i - 1])).collect::<Result<_, _>>()?;
    let sum = |f: &dyn Fn(&RootSl2) -> QMat| sl2s.iter().fold(Mat::zeros(m, m), |acc, r| &acc + &f(r));
    let nilnegative = sum(&|r| r.triple.n.clone());
    let grading = sum(&|r| r.triple.y.clone());
    let q = root_form(m);
    let h2_type = classify_h2x2_type(&nilnegative, &q)?;
    Ok(RootSl2s { m, q, sl2s, nilnegative, grading, h2_type })
}
