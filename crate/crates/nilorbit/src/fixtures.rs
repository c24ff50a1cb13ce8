//! Small explicit systems used throughout the tests and by the command line.
//!
//! Each fixture lives on `Q^n` with a named basis; operators are given by
//! their action on basis vectors.

use std::collections::BTreeMap;

use crate::deligne::DeligneSystemR;
use crate::exact::field::{gauss, int, rat};
use crate::exact::mat::unit_vec;
use crate::exact::{Gaussian, Mat, Rational, Subspace};
use crate::filtrations::{Filtration, HodgeFiltration};
use crate::exact::text::{filtration_from_json, filtration_to_json, hodge_from_json, hodge_to_json, mat_from_json, mat_to_json};
use crate::{Error, QMat};
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub basis: Vec<String>,
    /// Weight of the pure structure `W`.
    pub weight: i64,
    pub w: Filtration<Rational>,
    pub ns: Vec<QMat>,
    /// `Y^r`, the grading of the limit weight filtration.
    pub yr: QMat,
    pub f: HodgeFiltration<Gaussian>,
    pub q: Option<QMat>,
    /// Further named operators appearing in computations with this fixture.
    pub extras: BTreeMap<String, QMat>,
}

impl Fixture {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index(&self, name: &str) -> usize {
        self.basis.iter().position(|b| b == name).unwrap_or_else(|| panic!("no basis vector {name}"))
    }

    pub fn vector(&self, name: &str) -> Vec<Rational> {
        unit_vec(self.dim(), self.index(name))
    }

    pub fn system(&self) -> DeligneSystemR<Rational> {
        DeligneSystemR { w: self.w.clone(), ns: self.ns.clone(), yr: self.yr.clone() }
    }

    pub fn span(&self, names: &[&str]) -> Subspace<Rational> {
        let vs: Vec<Vec<Rational>> = names.iter().map(|n| self.vector(n)).collect();
        Subspace::span(self.dim(), &vs)
    }

    pub fn extra(&self, name: &str) -> &QMat {
        &self.extras[name]
    }

    /// The system file format read by the command line.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "basis": self.basis,
            "weight": self.weight,
            "w": filtration_to_json(&self.w),
            "n": self.ns.iter().map(mat_to_json).collect::<Vec<_>>(),
            "y": mat_to_json(&self.yr),
            "f": hodge_to_json(&self.f),
            "extras": self.extras.iter().map(|(k, m)| (k.clone(), mat_to_json(m))).collect::<serde_json::Map<_, _>>(),
        });
        if let Some(q) = &self.q {
            v["q"] = mat_to_json(q);
        }
        v
    }

    /// Reads a system file. Only `n` is required; `w` defaults to pure of
    /// `weight` (default 0), `y` to `weight` times the identity,
    /// `f` to the trivial filtration `F^0 = everything`.
    pub fn from_json(v: &Value) -> Result<Fixture, Error> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("a system file is a JSON object".into()))?;
        let ns: Vec<QMat> = match obj.get("n") {
            Some(Value::Array(a)) => a.iter().map(mat_from_json).collect::<Result<_, _>>()?,
            Some(_) => return Err(Error::Parse("`n` must be a list of matrices".into())),
            None => Vec::new(),
        };
        let q = obj.get("q").map(mat_from_json::<Rational>).transpose()?;
        let dim = match (ns.first(), &q, obj.get("basis").and_then(|b| b.as_array())) {
            (Some(n), _, _) => n.rows(),
            (None, Some(q), _) => q.rows(),
            (None, None, Some(b)) => b.len(),
            _ => return Err(Error::Parse("cannot infer the dimension: give `n`, `q` or `basis`".into())),
        };
        if let Some(n) = ns.iter().chain(q.iter()).find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Dimension(format!("expected {dim} x {dim} matrices, got {} x {}", n.rows(), n.cols())));
        }
        let basis = match obj.get("basis") {
            Some(b) => serde_json::from_value::<Vec<String>>(b.clone()).map_err(|e| Error::Parse(format!("basis: {e}")))?,
            None => (1..=dim).map(|i| format!("v{i}")).collect(),
        };
        if basis.len() != dim {
            return Err(Error::Dimension(format!("basis has {} names for dimension {dim}", basis.len())));
        }
        let weight = obj.get("weight").map(|w| w.as_i64().ok_or_else(|| Error::Parse("weight must be an integer".into()))).transpose()?.unwrap_or(0);
        let w = match obj.get("w") {
            Some(w) => filtration_from_json(dim, w)?,
            None => Filtration::pure(dim, weight),
        };
        let yr = match obj.get("y") {
            Some(y) => mat_from_json(y)?,
            None => QMat::identity(dim).scale(&int(weight)),
        };
        let f = match obj.get("f") {
            Some(f) => hodge_from_json(dim, f)?,
            None => HodgeFiltration::from_steps(dim, &[(0, Subspace::full(dim))])?,
        };
        let mut extras = BTreeMap::new();
        if let Some(e) = obj.get("extras") {
            let e = e.as_object().ok_or_else(|| Error::Parse("`extras` maps names to matrices".into()))?;
            for (k, m) in e {
                extras.insert(k.clone(), mat_from_json(m)?);
            }
        }
        let name = obj.get("name").and_then(|n| n.as_str()).unwrap_or("system").to_string();
        Ok(Fixture { name, basis, weight, w, ns, yr, f, q, extras })
    }
}

/// Matrix sending basis vector `from` to `c` times basis vector `to`, summed.
pub fn action(dim: usize, maps: &[(usize, usize, Rational)]) -> QMat {
    let mut m: QMat = Mat::zeros(dim, dim);
    for (to, from, c) in maps {
        let cur = m.get(*to, *from).clone();
        m.set(*to, *from, cur + c.clone());
    }
    m
}

/// Form with `Q(i, j) = c` and `Q(j, i) = sign c`.
pub fn form(dim: usize, pairs: &[(usize, usize, Rational)], sign: i64) -> QMat {
    let mut m = Mat::zeros(dim, dim);
    for (i, j, c) in pairs {
        m.set(*i, *j, c.clone());
        m.set(*j, *i, int(sign) * c.clone());
    }
    m
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Decreasing filtration from `(p, spanning vectors of F^p)`, highest `p`
/// first; the last entry is the whole space.
pub fn hodge(dim: usize, steps: &[(i64, Vec<Vec<Gaussian>>)]) -> HodgeFiltration<Gaussian> {
    let st: Vec<(i64, Subspace<Gaussian>)> =
        steps.iter().map(|(p, vs)| (*p, Subspace::span(dim, vs))).collect();
    HodgeFiltration::from_steps(dim, &st).expect("fixture Hodge filtration")
}

fn cvec(dim: usize, entries: &[(usize, Gaussian)]) -> Vec<Gaussian> {
    let mut v = vec![gauss(int(0), int(0)); dim];
    for (k, z) in entries {
        v[*k] = z.clone();
    }
    v
}

fn real(dim: usize, k: usize) -> Vec<Gaussian> {
    cvec(dim, &[(k, gauss(int(1), int(0)))])
}

fn all(dim: usize) -> Vec<Vec<Gaussian>> {
    (0..dim).map(|k| real(dim, k)).collect()
}

/// Two commuting nilpotents on `Q^4` with basis `e1, f1, e2, f2`:
/// `N1 e_i = f_i`, `N2 e1 = f2`, pure of weight 1 with `F^1 = <e1, e2>`.
/// It is a Deligne-Hodge system that admits no polarization.
pub fn unpolarizable_pair() -> Fixture {
    let d = 4;
    let one = int(1);
    let n1 = action(d, &[(1, 0, one.clone()), (3, 2, one.clone())]);
    let n2 = action(d, &[(3, 0, one)]);
    let yr = Mat::diag(&[int(2), int(0), int(2), int(0)]);
    let f = hodge(d, &[(1, vec![real(d, 0), real(d, 2)]), (0, all(d))]);
    Fixture {
        name: "unpolarizable-pair".into(),
        basis: names(&["e1", "f1", "e2", "f2"]),
        weight: 1,
        w: Filtration::pure(d, 1),
        ns: vec![n1, n2],
        yr,
        f,
        q: None,
        extras: BTreeMap::new(),
    }
}

/// Weight 1 with two orthogonal vanishing cycles: basis
/// `a1', a1, a2', a2, x, y`, `N_j a_j' = a_j`, `Q(a_j', a_j) = Q(x, y) = 1`,
/// and a weight-1 Hodge structure on `<x, y>` with `x + iy` of type `(1, 0)`.
pub fn vanishing_cycle_pair() -> Fixture {
    let d = 6;
    let one = int(1);
    let n1 = action(d, &[(1, 0, one.clone())]);
    let n2 = action(d, &[(3, 2, one.clone())]);
    let q = form(d, &[(0, 1, one.clone()), (2, 3, one.clone()), (4, 5, one)], -1);
    let yr = Mat::diag(&[int(2), int(0), int(2), int(0), int(1), int(1)]);
    let xy = cvec(d, &[(4, gauss(int(1), int(0))), (5, gauss(int(0), int(1)))]);
    let f = hodge(d, &[(1, vec![real(d, 0), real(d, 2), xy]), (0, all(d))]);
    Fixture {
        name: "vanishing-cycle-pair".into(),
        basis: names(&["a1'", "a1", "a2'", "a2", "x", "y"]),
        weight: 1,
        w: Filtration::pure(d, 1),
        ns: vec![n1, n2],
        yr,
        f,
        q: Some(q),
        extras: BTreeMap::new(),
    }
}

/// Weight 2, `S(2) + S(2) + R(-1)`: basis `a2, a1, a0, b2, b1, b0, g` with
/// `N1 a_j = j a_{j-1}`, `N2 b_j = j b_{j-1}`,
/// `Q(a_j, a_{2-j}) = Q(b_j, b_{2-j}) = (-1)^j j! (2-j)!`, `Q(g, g) = 1`.
/// Extras `eta1`..`eta4` are the isometric `(-1,-1)`-morphisms mixing the
/// factors.
pub fn two_quadratic_strings() -> Fixture {
    let d = 7;
    let (a2, a1, a0, b2, b1, b0, g) = (0, 1, 2, 3, 4, 5, 6);
    let n1 = action(d, &[(a1, a2, int(2)), (a0, a1, int(1))]);
    let n2 = action(d, &[(b1, b2, int(2)), (b0, b1, int(1))]);
    let q = form(
        d,
        &[(a0, a2, int(2)), (a1, a1, int(-1)), (b0, b2, int(2)), (b1, b1, int(-1)), (g, g, int(1))],
        1,
    );
    let yr = Mat::diag(&[int(4), int(2), int(0), int(4), int(2), int(0), int(2)]);
    let f = hodge(
        d,
        &[
            (2, vec![real(d, a2), real(d, b2)]),
            (1, vec![real(d, a2), real(d, b2), real(d, a1), real(d, b1), real(d, g)]),
            (0, all(d)),
        ],
    );
    let half = rat(1, 2);
    let mut extras = BTreeMap::new();
    extras.insert("eta1".into(), action(d, &[(b1, a2, int(1)), (a0, b1, half.clone())]));
    extras.insert("eta2".into(), action(d, &[(g, a2, int(1)), (a0, g, -half.clone())]));
    extras.insert("eta3".into(), action(d, &[(a1, b2, int(1)), (b0, a1, half.clone())]));
    extras.insert("eta4".into(), action(d, &[(g, b2, int(1)), (b0, g, -half)]));
    Fixture {
        name: "two-quadratic-strings".into(),
        basis: names(&["a2", "a1", "a0", "b2", "b1", "b0", "g"]),
        weight: 2,
        w: Filtration::pure(d, 2),
        ns: vec![n1, n2],
        yr,
        f,
        q: Some(q),
        extras,
    }
}

/// Weight 3, `S(3) + S(1)(-1)`: basis `a3, a2, a1, a0, b1, b0` with
/// `N1 a_j = j a_{j-1}`, `N2 b1 = b0`, `Q(a_j, a_{3-j}) = -(-1)^j j! (3-j)!`,
/// `Q(b1, b0) = 1`; `a_j` has type `(j, j)` and `b_j` type `(j+1, j+1)`. The
/// extra `eta` sends `a3 -> b1`, `b0 -> -a0/6`.
pub fn cubic_and_linear_strings() -> Fixture {
    let d = 6;
    let (a3, a2, a1, a0, b1, b0) = (0, 1, 2, 3, 4, 5);
    let n1 = action(d, &[(a2, a3, int(3)), (a1, a2, int(2)), (a0, a1, int(1))]);
    let n2 = action(d, &[(b0, b1, int(1))]);
    let q = form(d, &[(a3, a0, int(6)), (a2, a1, int(-2)), (b1, b0, int(1))], -1);
    let yr = Mat::diag(&[int(6), int(4), int(2), int(0), int(4), int(2)]);
    let f = hodge(
        d,
        &[
            (3, vec![real(d, a3)]),
            (2, vec![real(d, a3), real(d, a2), real(d, b1)]),
            (1, vec![real(d, a3), real(d, a2), real(d, b1), real(d, a1), real(d, b0)]),
            (0, all(d)),
        ],
    );
    let mut extras = BTreeMap::new();
    extras.insert("eta".into(), action(d, &[(b1, a3, int(1)), (a0, b0, rat(-1, 6))]));
    Fixture {
        name: "cubic-and-linear-strings".into(),
        basis: names(&["a3", "a2", "a1", "a0", "b1", "b0"]),
        weight: 3,
        w: Filtration::pure(d, 3),
        ns: vec![n1, n2],
        yr,
        f,
        q: Some(q),
        extras,
    }
}

pub fn all_fixtures() -> Vec<Fixture> {
    vec![unpolarizable_pair(), vanishing_cycle_pair(), two_quadratic_strings(), cubic_and_linear_strings()]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all_fixtures().into_iter().find(|f| f.name == name)
}
