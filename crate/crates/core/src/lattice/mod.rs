//! Eventualities as Hilbert subspaces, ordered by inclusion.
//!
//! Every [`Eventuality`] keeps a canonical orthonormal basis derived from its
//! projector alone, so two constructions of the same subspace yield the same
//! basis up to rounding. Equality is still tested on projectors.

pub mod classical;

#[cfg(test)]
use crate::error::Error;
use crate::error::Result;
use crate::hilbert::{
    self, canonical_basis, hermitian_eigen, max_abs, projector_from_basis, CMatrix, CVector,
    CompositeSpace, HilbertSpace, Ket, Operator, Structure, DEFAULT_TOL,
};

pub use classical::{ClassicalEventuality, ClassicalModel};

/// A Hilbert subspace: something that may or may not happen.
#[derive(Debug, Clone)]
pub struct Eventuality {
    space: HilbertSpace,
    basis: Vec<CVector>,
    projector: CMatrix,
}

impl Eventuality {
    /// The null eventuality ∅.
    pub fn null(space: &HilbertSpace) -> Self {
        Self::from_orthonormal(space, Vec::new())
    }

    /// The certain eventuality I.
    pub fn certain(space: &HilbertSpace) -> Self {
        let basis = (0..space.dim())
            .map(|i| {
                let mut v = CVector::zeros(space.dim());
                v[i] = hilbert::c(1.0);
                v
            })
            .collect();
        Self::from_orthonormal(space, basis)
    }

    /// Span of the given vectors. Vectors whose residual norm falls to `tol`
    /// or below during orthogonalization contribute nothing.
    pub fn from_vectors(space: &HilbertSpace, vectors: &[Ket], tol: f64) -> Result<Self> {
        let mut raw = Vec::with_capacity(vectors.len());
        for v in vectors {
            space.ensure_same(v.space())?;
            raw.push(v.components().clone());
        }
        Ok(Self::from_raw(space, &raw, tol))
    }

    /// Span of standard basis vectors `|i⟩` for the listed indices.
    pub fn from_basis_indices(space: &HilbertSpace, indices: &[usize]) -> Result<Self> {
        let kets = indices
            .iter()
            .map(|&i| Ket::basis(space, i))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vectors(space, &kets, DEFAULT_TOL)
    }

    /// The range of a projector. The operator must pass the projector check
    /// at `tol`.
    pub fn from_projector(op: &Operator, tol: f64) -> Result<Self> {
        op.structure_check(Structure::Projector, tol)
            .into_result()?;
        let (values, vectors) = hermitian_eigen(op.entries());
        // eigenvalues of an accepted projector cluster at 0 and 1
        let raw: Vec<CVector> = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.5)
            .map(|(k, _)| vectors.column(k).into_owned())
            .collect();
        Ok(Self::from_raw(op.space(), &raw, tol))
    }

    pub(crate) fn from_raw(space: &HilbertSpace, vectors: &[CVector], tol: f64) -> Self {
        let spanning = hilbert::orthonormalize(vectors, tol);
        let projector = projector_from_basis(space.dim(), &spanning);
        let basis = canonical_basis(&projector, tol);
        Self::from_orthonormal(space, basis)
    }

    fn from_orthonormal(space: &HilbertSpace, basis: Vec<CVector>) -> Self {
        let projector = projector_from_basis(space.dim(), &basis);
        Self {
            space: space.clone(),
            basis,
            projector,
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    /// Subspace dimension R = tr{e}.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn basis_kets(&self) -> Vec<Ket> {
        self.basis
            .iter()
            .map(|b| Ket::new(&self.space, b.clone()).expect("basis matches space"))
            .collect()
    }

    pub fn projector(&self) -> Operator {
        Operator::new(&self.space, self.projector.clone()).expect("projector matches space")
    }

    pub(crate) fn projector_matrix(&self) -> &CMatrix {
        &self.projector
    }

    pub fn is_null(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_certain(&self) -> bool {
        self.rank() == self.space.dim()
    }

    /// Projector equality within `tol`.
    pub fn same_as(&self, other: &Eventuality, tol: f64) -> bool {
        self.space == other.space && max_abs(&(&self.projector - &other.projector)) <= tol
    }

    /// Intersection e₁ ∩ e₂ at the default rank threshold.
    pub fn meet(&self, other: &Eventuality) -> Result<Eventuality> {
        self.meet_with_tol(other, DEFAULT_TOL)
    }

    /// Intersection via the null space of `2I − P₁ − P₂`, which is the sum of
    /// the two complementary projectors and so vanishes exactly on vectors
    /// lying in both subspaces.
    pub fn meet_with_tol(&self, other: &Eventuality, tol: f64) -> Result<Eventuality> {
        self.space.ensure_same(&other.space)?;
        if self.is_null() || other.is_null() {
            return Ok(Eventuality::null(&self.space));
        }
        let n = self.space.dim();
        let m = CMatrix::identity(n, n) * hilbert::c(2.0) - &self.projector - &other.projector;
        let (values, vectors) = hermitian_eigen(&m);
        let raw: Vec<CVector> = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v <= tol)
            .map(|(k, _)| vectors.column(k).into_owned())
            .collect();
        Ok(Eventuality::from_raw(&self.space, &raw, tol))
    }

    /// Intersection by De Morgan: ¬(¬e₁ ⊕ ¬e₂). Kept as an independent route
    /// for cross-checking [`Eventuality::meet`].
    pub fn meet_by_complements(&self, other: &Eventuality) -> Result<Eventuality> {
        Ok(self
            .orthocomplement()
            .join(&other.orthocomplement())?
            .orthocomplement())
    }

    /// The subspace spanned by both, e₁ ⊕ e₂.
    pub fn join(&self, other: &Eventuality) -> Result<Eventuality> {
        self.join_with_tol(other, DEFAULT_TOL)
    }

    pub fn join_with_tol(&self, other: &Eventuality, tol: f64) -> Result<Eventuality> {
        self.space.ensure_same(&other.space)?;
        let stacked: Vec<CVector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Eventuality::from_raw(&self.space, &stacked, tol))
    }

    /// The orthogonal complement, with projector `I − P`.
    pub fn orthocomplement(&self) -> Eventuality {
        let n = self.space.dim();
        let complement = CMatrix::identity(n, n) - &self.projector;
        let basis = canonical_basis(&complement, DEFAULT_TOL);
        Eventuality::from_orthonormal(&self.space, basis)
    }

    /// Partial order e₁ ⊂ e₂, tested as `P₂·P₁ = P₁` within `tol`.
    pub fn leq(&self, other: &Eventuality, tol: f64) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        Ok(max_abs(&(&other.projector * &self.projector - &self.projector)) <= tol)
    }

    /// Sufficient condition for mutual exclusivity: `e₁ e₂ = 0` within `tol`.
    pub fn orthogonal_to(&self, other: &Eventuality, tol: f64) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        Ok(max_abs(&(&self.projector * &other.projector)) <= tol)
    }

    /// The corresponding eventuality ê = e ⊗ I on a composite, with rank
    /// `R · N{other factors}`.
    pub fn lift(&self, comp: &CompositeSpace, factor: usize) -> Result<Eventuality> {
        comp.factor(factor)?.ensure_same(&self.space)?;
        let rest_dim = comp.complementary_dim(factor)?;
        let split: Vec<(usize, usize)> = (0..comp.dim())
            .map(|i| comp.split_index(i, factor))
            .collect();
        let mut vectors = Vec::with_capacity(self.rank() * rest_dim);
        for b in &self.basis {
            for rest in 0..rest_dim {
                let v = CVector::from_iterator(
                    comp.dim(),
                    split
                        .iter()
                        .map(|&(digit, r)| if r == rest { b[digit] } else { hilbert::c(0.0) }),
                );
                vectors.push(v);
            }
        }
        Ok(Eventuality::from_raw(comp.space(), &vectors, DEFAULT_TOL))
    }

    /// Heisenberg-picture transport `U† e U` (the time-transposed
    /// eventuality). `unitary` must pass the unitary check at `tol`.
    pub fn transport(&self, unitary: &Operator, tol: f64) -> Result<Eventuality> {
        self.space.ensure_same(unitary.space())?;
        unitary
            .structure_check(Structure::Unitary, tol)
            .into_result()?;
        let u_dag = unitary.entries().adjoint();
        let moved: Vec<CVector> = self.basis.iter().map(|b| &u_dag * b).collect();
        Ok(Eventuality::from_raw(&self.space, &moved, DEFAULT_TOL))
    }
}

impl PartialEq for Eventuality {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other, DEFAULT_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::c;

    fn space(dim: usize) -> HilbertSpace {
        HilbertSpace::new("h", dim).unwrap()
    }

    fn ket(h: &HilbertSpace, xs: &[f64]) -> Ket {
        Ket::from_real(h, xs).unwrap()
    }

    fn span(h: &HilbertSpace, vs: &[&[f64]]) -> Eventuality {
        let kets: Vec<Ket> = vs.iter().map(|v| ket(h, v)).collect();
        Eventuality::from_vectors(h, &kets, DEFAULT_TOL).unwrap()
    }

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn single_vector_span() {
        let h = space(2);
        let e = span(&h, &[&[1.0, 0.0]]);
        assert_eq!(e.rank(), 1);
        let expected = Operator::from_real_diagonal(&h, &[1.0, 0.0]).unwrap();
        assert!(e.projector().distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn dependent_vectors_collapse() {
        let h = space(2);
        assert_eq!(span(&h, &[&[1.0, 0.0], &[2.0, 0.0]]).rank(), 1);
    }

    #[test]
    fn from_projector_eigenbasis() {
        let h = space(2);
        let p = Operator::from_real_rows(&h, &[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let e = Eventuality::from_projector(&p, 1e-10).unwrap();
        assert_eq!(e.rank(), 1);
        let b = &e.basis()[0];
        assert!((b[0] - c(S)).norm() < 1e-12 && (b[1] - c(S)).norm() < 1e-12);
    }

    #[test]
    fn from_projector_rejects_non_projector() {
        let h = space(2);
        let p = Operator::from_real_diagonal(&h, &[0.5, 0.0]).unwrap();
        assert!(matches!(
            Eventuality::from_projector(&p, 1e-10),
            Err(Error::Structure {
                kind: "projector",
                ..
            })
        ));
    }

    #[test]
    fn meet_examples() {
        let h = space(3);
        let e01 = Eventuality::from_basis_indices(&h, &[0, 1]).unwrap();
        let e12 = Eventuality::from_basis_indices(&h, &[1, 2]).unwrap();
        let e1 = Eventuality::from_basis_indices(&h, &[1]).unwrap();
        assert!(e01.meet(&e12).unwrap().same_as(&e1, 1e-10));

        let tilted = span(&h, &[&[S, 0.0, S], &[0.0, 1.0, 0.0]]);
        let m = e01.meet(&tilted).unwrap();
        assert!(m.same_as(&e1, 1e-10));
        assert!(m.same_as(&e01.meet_by_complements(&tilted).unwrap(), 1e-10));

        let h2 = space(2);
        let zero = span(&h2, &[&[1.0, 0.0]]);
        let plus = span(&h2, &[&[S, S]]);
        assert!(zero.meet(&plus).unwrap().is_null());
    }

    #[test]
    fn meet_with_extremes() {
        let h = space(3);
        let e = span(&h, &[&[1.0, 1.0, 0.0]]);
        assert!(e
            .meet(&Eventuality::certain(&h))
            .unwrap()
            .same_as(&e, 1e-10));
        assert!(e.meet(&Eventuality::null(&h)).unwrap().is_null());
    }

    #[test]
    fn join_examples() {
        let h = space(2);
        let zero = span(&h, &[&[1.0, 0.0]]);
        let one = span(&h, &[&[0.0, 1.0]]);
        let plus = span(&h, &[&[S, S]]);
        assert_eq!(zero.join(&one).unwrap().rank(), 2);
        assert!(zero.join(&zero).unwrap().same_as(&zero, 1e-12));
        assert!(zero.join(&plus).unwrap().is_certain());
        assert!(zero
            .join(&Eventuality::null(&h))
            .unwrap()
            .same_as(&zero, 1e-12));
    }

    #[test]
    fn complement_examples() {
        let h = space(2);
        assert!(Eventuality::null(&h).orthocomplement().is_certain());
        let zero = span(&h, &[&[1.0, 0.0]]);
        let one = span(&h, &[&[0.0, 1.0]]);
        assert!(zero.orthocomplement().same_as(&one, 1e-12));
    }

    #[test]
    fn leq_examples() {
        let h = space(3);
        let e0 = Eventuality::from_basis_indices(&h, &[0]).unwrap();
        let e01 = Eventuality::from_basis_indices(&h, &[0, 1]).unwrap();
        assert!(Eventuality::null(&h).leq(&e0, 1e-10).unwrap());
        assert!(e0.leq(&e01, 1e-10).unwrap());
        assert!(!e01.leq(&e0, 1e-10).unwrap());
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let a = Eventuality::certain(&space(2));
        let b = Eventuality::certain(&HilbertSpace::new("k", 2).unwrap());
        assert!(matches!(a.meet(&b), Err(Error::SpaceMismatch { .. })));
        assert!(a.join(&b).is_err());
        assert!(a.leq(&b, 1e-10).is_err());
    }

    #[test]
    fn canonical_basis_is_construction_independent() {
        let h = space(3);
        let a = span(&h, &[&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let b = span(&h, &[&[1.0, 1.0, 2.0], &[1.0, 1.0, -3.0]]);
        for (x, y) in a.basis().iter().zip(b.basis()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn lift_rank_scales_with_other_factors() {
        let a = HilbertSpace::new("a", 2).unwrap();
        let b = HilbertSpace::new("b", 4).unwrap();
        let comp = CompositeSpace::new(vec![a.clone(), b.clone()]).unwrap();
        let e = Eventuality::from_basis_indices(&a, &[0]).unwrap();
        let lifted = e.lift(&comp, 0).unwrap();
        assert_eq!(lifted.rank(), 4);
        let direct = comp.lift_operator(0, &e.projector()).unwrap();
        assert!(lifted.projector().distance(&direct).unwrap() < 1e-12);

        let f = Eventuality::from_basis_indices(&b, &[1, 3]).unwrap();
        let lifted = f.lift(&comp, 1).unwrap();
        assert_eq!(lifted.rank(), 4);
        let direct = comp.lift_operator(1, &f.projector()).unwrap();
        assert!(lifted.projector().distance(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn transport_by_pauli_x() {
        let h = space(2);
        let x = Operator::from_real_rows(&h, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let zero = Eventuality::from_basis_indices(&h, &[0]).unwrap();
        let one = Eventuality::from_basis_indices(&h, &[1]).unwrap();
        assert!(zero.transport(&x, 1e-10).unwrap().same_as(&one, 1e-12));
        assert!(zero
            .transport(&Operator::identity(&h), 1e-10)
            .unwrap()
            .same_as(&zero, 1e-12));
        let not_unitary = Operator::from_real_diagonal(&h, &[2.0, 1.0]).unwrap();
        assert!(zero.transport(&not_unitary, 1e-10).is_err());
    }
}
