use super::field::Field;
use super::mat::{is_zero_vec, Mat};

/// A linear subspace of `T^n`, stored by its reduced row echelon basis so that
/// equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &(0..ambient).map(|k| super::mat::unit_vec(ambient, k)).collect::<Vec<_>>())
    }

    pub fn span(ambient: usize, vectors: &[Vec<T>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length mismatch");
        let m = Mat::from_rows(vectors.to_vec()).expect("uniform rows");
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace { ambient, basis, pivots }
    }

    /// Span of the given coordinate vectors `e_k`.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vec<T>> = indices.iter().map(|&k| super::mat::unit_vec(ambient, k)).collect();
        Self::span(ambient, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        let c: Vec<T> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            for (x, y) in r.iter_mut().zip(b) {
                *x = x.clone() - ci.clone() * y.clone();
            }
        }
        is_zero_vec(&r).then_some(c)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient);
        }
        // x = sum a_i u_i = sum b_j w_j  <=>  [U^T | -W^T] (a, b) = 0
        let (p, q) = (self.dim(), other.dim());
        let m = Mat::from_fn(self.ambient, p + q, |i, j| {
            if j < p { self.basis[j][i].clone() } else { -other.basis[j - p][i].clone() }
        });
        let vs: Vec<Vec<T>> = m
            .kernel()
            .iter()
            .map(|k| {
                (0..self.ambient)
                    .map(|i| {
                        (0..p).fold(T::zero(), |acc, j| acc + k[j].clone() * self.basis[j][i].clone())
                    })
                    .collect()
            })
            .collect();
        Self::span(self.ambient, &vs)
    }

    pub fn image(&self, a: &Mat<T>) -> Self {
        let vs: Vec<Vec<T>> = self.basis.iter().map(|b| a.apply(b)).collect();
        Self::span(a.rows(), &vs)
    }

    /// Rows of a matrix whose kernel is exactly this subspace.
    pub fn equations(&self) -> Vec<Vec<T>> {
        if self.is_zero() {
            return (0..self.ambient).map(|k| super::mat::unit_vec(self.ambient, k)).collect();
        }
        Mat::from_rows(self.basis.clone()).expect("uniform rows").kernel()
    }

    /// `{x : a x ∈ self}`.
    pub fn preimage(&self, a: &Mat<T>) -> Self {
        let eq = self.equations();
        if eq.is_empty() {
            return Self::full(a.cols());
        }
        let e = Mat::from_rows(eq).expect("uniform rows");
        Self::span(a.cols(), &(&e * a).kernel())
    }

    pub fn is_invariant(&self, a: &Mat<T>) -> bool {
        self.image(a).is_subspace_of(self)
    }

    /// Vectors extending a basis of `sub` (assumed inside `self`) to a basis of `self`.
    pub fn complement_of(&self, sub: &Self) -> Vec<Vec<T>> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for b in &self.basis {
            if !acc.contains(b) {
                acc = acc.sum(&Self::span(self.ambient, std::slice::from_ref(b)));
                out.push(b.clone());
            }
        }
        out
    }

    pub fn map_field<U: Field>(&self, f: impl Fn(&T) -> U) -> Subspace<U> {
        let vs: Vec<Vec<U>> = self.basis.iter().map(|b| b.iter().map(&f).collect()).collect();
        Subspace::span(self.ambient, &vs)
    }

    pub fn conj(&self) -> Self {
        self.map_field(|x| x.conj())
    }

    /// Real points: whether the subspace is stable under conjugation.
    pub fn is_conj_stable(&self) -> bool {
        self.conj() == *self
    }
}
