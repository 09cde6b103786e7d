//! Complex vectors and operators over finite-dimensional Hilbert spaces.
//!
//! Composite spaces use the row-major Kronecker convention throughout: for
//! factors `A ⊗ B`, the basis state `|a⟩|b⟩` sits at index `a * dim(B) + b`,
//! so the first factor is the slowest-varying index.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default rank / structure tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A finite-dimensional Hilbert space, identified by label and dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    label: String,
    dim: usize,
}

impl HilbertSpace {
    pub fn new(label: impl Into<String>, dim: usize) -> Result<Self> {
        let label = label.into();
        if dim == 0 {
            return Err(Error::EmptySpace { label, dim });
        }
        Ok(Self { label, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The space `self ⊗ other`.
    pub fn product(&self, other: &HilbertSpace) -> HilbertSpace {
        HilbertSpace {
            label: format!("{}⊗{}", self.label, other.label),
            dim: self.dim * other.dim,
        }
    }

    pub(crate) fn ensure_same(&self, other: &HilbertSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.label, self.dim)
    }
}

/// A vector in a Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    space: HilbertSpace,
    components: CVector,
}

impl Ket {
    pub fn new(space: &HilbertSpace, components: CVector) -> Result<Self> {
        if components.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: components.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            components,
        })
    }

    pub fn from_slice(space: &HilbertSpace, components: &[Complex64]) -> Result<Self> {
        Self::new(space, CVector::from_column_slice(components))
    }

    pub fn from_real(space: &HilbertSpace, components: &[f64]) -> Result<Self> {
        Self::new(
            space,
            CVector::from_iterator(components.len(), components.iter().map(|&x| c(x))),
        )
    }

    /// A normalized state vector; the squared norm must be 1 within `tol`.
    pub fn state(space: &HilbertSpace, components: CVector, tol: f64) -> Result<Self> {
        let ket = Self::new(space, components)?;
        let residual = (ket.norm_sqr() - 1.0).abs();
        if residual > tol {
            return Err(Error::InvalidState {
                invariant: "unit norm",
                residual,
                tol,
            });
        }
        Ok(ket)
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(space: &HilbertSpace, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: index + 1,
            });
        }
        let mut components = CVector::zeros(space.dim());
        components[index] = c(1.0);
        Ok(Self {
            space: space.clone(),
            components,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn components(&self) -> &CVector {
        &self.components
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        self.space.ensure_same(&other.space)?;
        Ok(self.components.dotc(&other.components))
    }

    pub fn normalized(&self) -> Option<Ket> {
        let norm = self.components.norm();
        (norm > 0.0).then(|| Ket {
            space: self.space.clone(),
            components: self.components.unscale(norm),
        })
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            space: self.space.product(&other.space),
            components: self.components.kronecker(&other.components),
        }
    }
}

/// Which defining identity [`Operator::structure_check`] tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Hermitian,
    Unitary,
    Projector,
    PositiveSemidefinite,
}

impl Structure {
    pub fn name(self) -> &'static str {
        match self {
            Structure::Hermitian => "hermitian",
            Structure::Unitary => "unitary",
            Structure::Projector => "projector",
            Structure::PositiveSemidefinite => "psd",
        }
    }
}

/// Outcome of a structural predicate: the residual of the defining identity
/// (max-abs-entry norm) and whether it is within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    pub kind: Structure,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl StructureReport {
    pub fn into_result(self) -> Result<()> {
        if self.passed {
            Ok(())
        } else {
            Err(Error::Structure {
                kind: self.kind.name(),
                residual: self.residual,
                tol: self.tol,
            })
        }
    }
}

/// A linear operator on a Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    entries: CMatrix,
}

impl Operator {
    pub fn new(space: &HilbertSpace, entries: CMatrix) -> Result<Self> {
        if entries.nrows() != space.dim() || entries.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: if entries.nrows() != space.dim() {
                    entries.nrows()
                } else {
                    entries.ncols()
                },
            });
        }
        Ok(Self {
            space: space.clone(),
            entries,
        })
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        Self {
            space: space.clone(),
            entries: CMatrix::identity(space.dim(), space.dim()),
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        Self {
            space: space.clone(),
            entries: CMatrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn from_real_diagonal(space: &HilbertSpace, diagonal: &[f64]) -> Result<Self> {
        if diagonal.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: diagonal.len(),
            });
        }
        let d = CVector::from_iterator(diagonal.len(), diagonal.iter().map(|&x| c(x)));
        Ok(Self {
            space: space.clone(),
            entries: CMatrix::from_diagonal(&d),
        })
    }

    /// Real row-major entries.
    pub fn from_real_rows(space: &HilbertSpace, rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let entries = CMatrix::from_fn(n, n, |i, j| c(rows[i].get(j).copied().unwrap_or(f64::NAN)));
        Self::new(space, entries)
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Result<Self> {
        a.space.ensure_same(&b.space)?;
        Ok(Self {
            space: a.space.clone(),
            entries: &a.components * b.components.adjoint(),
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            entries: self.entries.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.space.ensure_same(&other.space)?;
        Ok(Operator {
            space: self.space.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.space.ensure_same(&other.space)?;
        Ok(Operator {
            space: self.space.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.space.ensure_same(&other.space)?;
        Ok(Operator {
            space: self.space.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            space: self.space.clone(),
            entries: &self.entries * factor,
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.space.ensure_same(&other.space)?;
        Ok(Operator {
            space: self.space.clone(),
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
        })
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        self.space.ensure_same(&ket.space)?;
        Ok(Ket {
            space: self.space.clone(),
            components: &self.entries * &ket.components,
        })
    }

    pub fn tensor(&self, other: &Operator) -> Operator {
        Operator {
            space: self.space.product(&other.space),
            entries: self.entries.kronecker(&other.entries),
        }
    }

    /// Largest absolute entry (Chebyshev norm).
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// Max-abs distance to another operator on the same space.
    pub fn distance(&self, other: &Operator) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(max_abs(&(&self.entries - &other.entries)))
    }

    /// Tests the defining identity of `kind` and reports its residual.
    ///
    /// Panics if `tol` is not positive.
    pub fn structure_check(&self, kind: Structure, tol: f64) -> StructureReport {
        assert!(tol > 0.0, "structure_check tolerance must be positive");
        let m = &self.entries;
        let hermitian = || max_abs(&(m - m.adjoint()));
        let residual = match kind {
            Structure::Hermitian => hermitian(),
            Structure::Unitary => {
                let n = m.nrows();
                max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
            }
            Structure::Projector => hermitian().max(max_abs(&(m * m - m))),
            Structure::PositiveSemidefinite => {
                let (values, _) = hermitian_eigen(&hermitian_part(m));
                let min = values.last().copied().unwrap_or(0.0);
                hermitian().max(-min)
            }
        };
        StructureReport {
            kind,
            residual,
            tol,
            passed: residual <= tol,
        }
    }
}

/// Ordered tensor factors `F₀ ⊗ F₁ ⊗ …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    factors: Vec<HilbertSpace>,
    space: HilbertSpace,
}

impl CompositeSpace {
    pub fn new(factors: Vec<HilbertSpace>) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or(Error::EmptySpace {
            label: "composite".into(),
            dim: 0,
        })?;
        let space = rest.iter().fold(first.clone(), |acc, f| acc.product(f));
        Ok(Self { factors, space })
    }

    pub fn factors(&self) -> &[HilbertSpace] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> Result<&HilbertSpace> {
        self.factors.get(index).ok_or(Error::FactorOutOfRange {
            index,
            factors: self.factors.len(),
        })
    }

    /// The joint space on which composite operators act.
    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Product of the dimensions of every factor except `index`.
    pub fn complementary_dim(&self, index: usize) -> Result<usize> {
        Ok(self.dim() / self.factor(index)?.dim())
    }

    /// Splits a joint index into (digit of factor `keep`, combined index of
    /// the remaining factors in their original order).
    pub(crate) fn split_index(&self, index: usize, keep: usize) -> (usize, usize) {
        let mut rest = 0;
        let mut kept = 0;
        let mut stride = self.dim();
        for (k, f) in self.factors.iter().enumerate() {
            stride /= f.dim();
            let digit = (index / stride) % f.dim();
            if k == keep {
                kept = digit;
            } else {
                rest = rest * f.dim() + digit;
            }
        }
        (kept, rest)
    }

    /// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` in slot `factor`.
    pub fn lift_operator(&self, factor: usize, op: &Operator) -> Result<Operator> {
        self.factor(factor)?.ensure_same(op.space())?;
        let entries = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, f)| {
                if k == factor {
                    op.entries.clone()
                } else {
                    CMatrix::identity(f.dim(), f.dim())
                }
            })
            .reduce(|acc, m| acc.kronecker(&m))
            .expect("composite has at least one factor");
        Ok(Operator {
            space: self.space.clone(),
            entries,
        })
    }

    /// Traces out every factor except `keep`.
    pub fn partial_trace(&self, m: &Operator, keep: usize) -> Result<Operator> {
        if m.space() != &self.space {
            return Err(Error::UnknownFactorization {
                composite: self.space.to_string(),
                found: m.space().to_string(),
            });
        }
        let kept_space = self.factor(keep)?.clone();
        let n = self.dim();
        let split: Vec<(usize, usize)> = (0..n).map(|i| self.split_index(i, keep)).collect();
        let mut out = CMatrix::zeros(kept_space.dim(), kept_space.dim());
        for (i, &(a, ri)) in split.iter().enumerate() {
            for (j, &(b, rj)) in split.iter().enumerate() {
                if ri == rj {
                    out[(a, b)] += m.entries[(i, j)];
                }
            }
        }
        Operator::new(&kept_space, out)
    }
}

#[inline]
pub(crate) fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending
/// order with eigenvectors as the matching columns.
///
/// Cyclic complex Jacobi: each rotation first removes the phase of the
/// pivot `a_pq`, then applies the real symmetric rotation that annihilates
/// it. Only the Hermitian part of `m` is used.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut a = hermitian_part(m);
    let mut v = CMatrix::identity(n, n);
    let frobenius_sqr: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= f64::EPSILON * f64::EPSILON * frobenius_sqr || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let z = a[(p, q)];
                let modulus = z.norm();
                if modulus == 0.0 {
                    continue;
                }
                let phase = z / modulus;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * modulus);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let (cs_c, sn_c) = (c(cs), c(sn));
                // A ← A J with J = diag(1, e^{-iφ}) · R(θ)
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = cs_c * akp - sn_c * phase.conj() * akq;
                    a[(k, q)] = sn_c * akp + cs_c * phase.conj() * akq;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = cs_c * vkp - sn_c * phase.conj() * vkq;
                    v[(k, q)] = sn_c * vkp + cs_c * phase.conj() * vkq;
                }
                // A ← J† A
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = cs_c * apk - sn_c * phase * aqk;
                    a[(q, k)] = sn_c * apk + cs_c * phase * aqk;
                }
                a[(p, q)] = c(0.0);
                a[(q, p)] = c(0.0);
                a[(p, p)] = c(a[(p, p)].re);
                a[(q, q)] = c(a[(q, q)].re);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Rank-revealing modified Gram-Schmidt with column pivoting.
///
/// At each step the remaining vector of largest residual norm is taken
/// (ties go to the lowest index); residuals of norm `<= tol` are dropped.
/// Each projection is applied twice to keep the basis orthonormal to
/// working precision.
pub(crate) fn orthonormalize(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut work: Vec<CVector> = vectors.to_vec();
    let mut remaining: Vec<usize> = (0..work.len()).collect();
    let mut basis: Vec<CVector> = Vec::new();
    loop {
        let mut pivot: Option<(usize, f64)> = None;
        for (slot, &k) in remaining.iter().enumerate() {
            let norm = work[k].norm();
            match pivot {
                Some((_, best)) if norm <= best * (1.0 + 1e-9) => {}
                _ => pivot = Some((slot, norm)),
            }
        }
        let Some((slot, norm)) = pivot else { break };
        if norm <= tol {
            break;
        }
        let k = remaining.remove(slot);
        let q = work[k].unscale(norm);
        for &r in &remaining {
            for _ in 0..2 {
                let overlap = q.dotc(&work[r]);
                work[r] -= &q * overlap;
            }
        }
        basis.push(q);
    }
    basis
}

/// Canonical orthonormal basis of the range of a projector: pivoted
/// Gram-Schmidt over its columns, which depends only on the subspace.
pub(crate) fn canonical_basis(projector: &CMatrix, tol: f64) -> Vec<CVector> {
    let columns: Vec<CVector> = projector
        .column_iter()
        .map(|col| col.into_owned())
        .collect();
    orthonormalize(&columns, tol)
}

pub(crate) fn projector_from_basis(dim: usize, basis: &[CVector]) -> CMatrix {
    basis
        .iter()
        .fold(CMatrix::zeros(dim, dim), |acc, b| acc + b * b.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(dim: usize) -> HilbertSpace {
        HilbertSpace::new("h", dim).unwrap()
    }

    fn pauli_x() -> Operator {
        Operator::from_real_rows(&space(2), &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(HilbertSpace::new("z", 0).is_err());
    }

    #[test]
    fn tensor_of_basis_kets() {
        let h = space(2);
        let k = Ket::basis(&h, 0)
            .unwrap()
            .tensor(&Ket::basis(&h, 0).unwrap());
        assert_eq!(k.space().dim(), 4);
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (z, e) in k.components().iter().zip(expected) {
            assert_eq!(*z, c(e));
        }
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let h = space(2);
        let id = Operator::identity(&h).tensor(&Operator::identity(&h));
        assert_eq!(id.entries(), &CMatrix::identity(4, 4));
    }

    #[test]
    fn tensor_matches_index_oracle() {
        let h = space(2);
        let a = Operator::from_real_diagonal(&h, &[1.0, 0.0]).unwrap();
        let b = Operator::from_real_diagonal(&h, &[0.0, 1.0]).unwrap();
        let t = a.tensor(&b);
        // entry (i1*2+j1, i2*2+j2) = a[i1][i2] * b[j1][j2]
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..2 {
                    for j2 in 0..2 {
                        let expected = a.entries()[(i1, i2)] * b.entries()[(j1, j2)];
                        assert_eq!(t.entries()[(i1 * 2 + j1, i2 * 2 + j2)], expected);
                    }
                }
            }
        }
        let diag: Vec<f64> = (0..4).map(|i| t.entries()[(i, i)].re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = space(2);
        let b = HilbertSpace::new("b", 2).unwrap();
        let comp = CompositeSpace::new(vec![a.clone(), b.clone()]).unwrap();
        let psi = Ket::from_real(&b, &[0.6, 0.8]).unwrap();
        let joint = Ket::basis(&a, 0).unwrap().tensor(&psi);
        let rho = Operator::outer(&joint, &joint).unwrap();
        let reduced = comp.partial_trace(&rho, 0).unwrap();
        let expected = Operator::from_real_diagonal(&a, &[1.0, 0.0]).unwrap();
        assert!(reduced.distance(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let a = space(2);
        let b = HilbertSpace::new("b", 2).unwrap();
        let comp = CompositeSpace::new(vec![a.clone(), b]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Ket::from_real(comp.space(), &[s, 0.0, 0.0, s]).unwrap();
        let rho = Operator::outer(&bell, &bell).unwrap();
        let reduced = comp.partial_trace(&rho, 0).unwrap();
        let half = Operator::from_real_diagonal(&a, &[0.5, 0.5]).unwrap();
        assert!(reduced.distance(&half).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_foreign_operator() {
        let comp = CompositeSpace::new(vec![space(2), space(3)]).unwrap();
        let other = Operator::identity(&HilbertSpace::new("x", 6).unwrap());
        assert!(matches!(
            comp.partial_trace(&other, 0),
            Err(Error::UnknownFactorization { .. })
        ));
    }

    #[test]
    fn split_index_three_factors() {
        let comp = CompositeSpace::new(vec![space(2), space(3), space(2)]).unwrap();
        // index 9 = (1, 1, 1) in dims (2,3,2)
        assert_eq!(comp.split_index(9, 1), (1, 3));
        assert_eq!(comp.split_index(9, 0), (1, 3));
        assert_eq!(comp.split_index(9, 2), (1, 4));
    }

    #[test]
    fn structure_checks() {
        let h = space(2);
        let p = Operator::from_real_diagonal(&h, &[1.0, 0.0]).unwrap();
        assert!(p.structure_check(Structure::Projector, 1e-10).passed);
        assert!(pauli_x().structure_check(Structure::Unitary, 1e-10).passed);
        assert!(
            !pauli_x()
                .structure_check(Structure::Projector, 1e-10)
                .passed
        );
        assert!(
            !pauli_x()
                .structure_check(Structure::PositiveSemidefinite, 1e-10)
                .passed
        );
    }

    #[test]
    fn projector_residual_reported() {
        let h = space(2);
        let p = Operator::from_real_diagonal(&h, &[1.0 + 2e-10, 0.0]).unwrap();
        let report = p.structure_check(Structure::Projector, 1e-10);
        assert!(!report.passed);
        assert!(
            (report.residual - 2e-10).abs() < 1e-15,
            "{}",
            report.residual
        );
    }

    #[test]
    fn hermitian_eigen_on_degenerate_complex_matrix() {
        // diag(2, 2, -1) rotated by a non-real unitary built from a phase and a
        // Hadamard-like mixing
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::new(0.0, 1.0);
        let u = CMatrix::from_row_slice(
            3,
            3,
            &[c(s), i * s, c(0.0), c(s), -i * s, c(0.0), c(0.0), c(0.0), i],
        );
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0), c(2.0), c(-1.0)]));
        let m = &u * d * u.adjoint();
        let (values, vectors) = hermitian_eigen(&m);
        assert!((values[0] - 2.0).abs() < 1e-14 && (values[2] + 1.0).abs() < 1e-14);
        let lambda =
            CMatrix::from_diagonal(&CVector::from_iterator(3, values.iter().map(|&x| c(x))));
        assert!(max_abs(&(&m * &vectors - &vectors * lambda)) < 1e-14);
        assert!(max_abs(&(vectors.adjoint() * &vectors - CMatrix::identity(3, 3))) < 1e-14);
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let v = |x: f64, y: f64| CVector::from_vec(vec![c(x), c(y)]);
        let basis = orthonormalize(&[v(1.0, 0.0), v(2.0, 0.0)], 1e-10);
        assert_eq!(basis.len(), 1);
        assert!((basis[0][0] - c(1.0)).norm() < 1e-15);
        let basis = orthonormalize(&[v(1e-12, 0.0)], 1e-10);
        assert!(basis.is_empty());
    }
}
