//! Random states, unitaries and subspaces for property checks and
//! what-if exploration.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{c, CMatrix, CVector, HilbertSpace, Ket, Operator, DEFAULT_TOL};
use crate::lattice::Eventuality;
use crate::observable::Observable;
use crate::probability::ProbabilityOperator;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| gaussian(rng))
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniformly distributed unit vector.
pub fn state<R: Rng + ?Sized>(rng: &mut R, space: &HilbertSpace) -> Ket {
    let v = gaussian_vector(rng, space.dim());
    let norm = v.norm();
    Ket::new(space, v.unscale(norm)).expect("dimension matches")
}

/// `G G† / tr(G G†)` for a Ginibre matrix `G` with `rank` columns.
pub fn density<R: Rng + ?Sized>(
    rng: &mut R,
    space: &HilbertSpace,
    rank: usize,
) -> ProbabilityOperator {
    let g = gaussian_matrix(rng, space.dim(), rank.max(1));
    let m = &g * g.adjoint();
    let m = &m * c(1.0 / m.trace().re);
    let m = (&m + m.adjoint()) * c(0.5);
    ProbabilityOperator::new(Operator::new(space, m).expect("square"), 1e-9)
        .expect("Ginibre construction is a valid state")
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, space: &HilbertSpace) -> Operator {
    let n = space.dim();
    let qr = gaussian_matrix(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column phases so the distribution is Haar
    let phases = CMatrix::from_diagonal(&CVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0)
        }
    }));
    Operator::new(space, q * phases).expect("square")
}

/// Random Hermitian operator with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, space: &HilbertSpace) -> Operator {
    let g = gaussian_matrix(rng, space.dim(), space.dim());
    Operator::new(space, (&g + g.adjoint()) * c(0.5)).expect("square")
}

/// Randomly oriented subspace of the given rank.
pub fn subspace<R: Rng + ?Sized>(rng: &mut R, space: &HilbertSpace, rank: usize) -> Eventuality {
    let raw: Vec<CVector> = (0..rank.min(space.dim()))
        .map(|_| gaussian_vector(rng, space.dim()))
        .collect();
    Eventuality::from_raw(space, &raw, DEFAULT_TOL)
}

/// Random observable: a Haar-rotated grouping of the standard basis into
/// `channels` non-empty blocks.
pub fn observable<R: Rng + ?Sized>(
    rng: &mut R,
    space: &HilbertSpace,
    channels: usize,
) -> Observable {
    let n = space.dim();
    let k = channels.clamp(1, n);
    // block sizes: one each, the remainder scattered at random
    let mut sizes = vec![1usize; k];
    for _ in k..n {
        sizes[rng.gen_range(0..k)] += 1;
    }
    let u = unitary(rng, space);
    let mut start = 0;
    let mut out = Vec::with_capacity(k);
    for (i, size) in sizes.into_iter().enumerate() {
        let raw: Vec<CVector> = (start..start + size)
            .map(|col| u.entries().column(col).into_owned())
            .collect();
        start += size;
        out.push((
            format!("e{i}"),
            Eventuality::from_raw(space, &raw, DEFAULT_TOL),
        ));
    }
    Observable::new(space, out, 1e-9).expect("columns of a unitary are orthonormal")
}
