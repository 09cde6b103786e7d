//! The von Neumann probability calculus.
//!
//! Gross probabilities are `tr{P e}`. Conditioning on an eventuality `e`
//! replaces `P` by `e P e / tr{P e}`, and Luder's rule replaces `P` by the
//! channel-sandwiched sum `Σ e_i P e_i`. None of these functions clamp; any
//! clamping to `[0, 1]` is left to presentation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{
    c, hermitian_eigen, hermitian_part, max_abs, CMatrix, CompositeSpace, HilbertSpace, Ket,
    Operator, Structure,
};
use crate::lattice::Eventuality;
use crate::observable::Observable;

/// Validation tolerance for probability operators.
pub const STATE_TOL: f64 = 1e-10;

/// Conditioning on an eventuality of probability at or below this fails.
pub const ZERO_PROBABILITY_THRESHOLD: f64 = 1e-12;

/// A Hermitian, positive-semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityOperator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl ProbabilityOperator {
    /// Validates hermiticity, unit trace and positivity at `tol`.
    pub fn new(op: Operator, tol: f64) -> Result<Self> {
        let report = op.structure_check(Structure::Hermitian, tol);
        if !report.passed {
            return Err(Error::InvalidState {
                invariant: "hermitian",
                residual: report.residual,
                tol,
            });
        }
        let trace = op.trace();
        let residual = (trace - c(1.0)).norm();
        if residual > tol {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                residual,
                tol,
            });
        }
        let (values, _) = hermitian_eigen(op.entries());
        let min = values.last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                residual: -min,
                tol,
            });
        }
        let space = op.space().clone();
        Ok(Self {
            space,
            matrix: op.into_entries(),
        })
    }

    /// `|Ψ⟩⟨Ψ|` for a unit vector.
    pub fn pure(state: &Ket, tol: f64) -> Result<Self> {
        let residual = (state.norm_sqr() - 1.0).abs();
        if residual > tol {
            return Err(Error::InvalidState {
                invariant: "unit norm",
                residual,
                tol,
            });
        }
        Ok(Self {
            space: state.space().clone(),
            matrix: state.components() * state.components().adjoint(),
        })
    }

    pub fn from_diagonal(space: &HilbertSpace, weights: &[f64], tol: f64) -> Result<Self> {
        Self::new(Operator::from_real_diagonal(space, weights)?, tol)
    }

    /// The isotropic distribution `I / N`.
    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let n = space.dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::identity(n, n) * c(1.0 / n as f64),
        }
    }

    /// Wraps a matrix known to be valid up to rounding, re-symmetrizing it.
    fn trusted(space: &HilbertSpace, m: CMatrix) -> Self {
        Self {
            space: space.clone(),
            matrix: hermitian_part(&m),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn operator(&self) -> Operator {
        Operator::new(&self.space, self.matrix.clone()).expect("dimension matches")
    }

    pub fn distance(&self, other: &ProbabilityOperator) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// Schroedinger-picture evolution `U P U†`.
    pub fn evolve(&self, unitary: &Operator, tol: f64) -> Result<ProbabilityOperator> {
        self.space.ensure_same(unitary.space())?;
        unitary
            .structure_check(Structure::Unitary, tol)
            .into_result()?;
        let u = unitary.entries();
        Ok(Self::trusted(&self.space, u * &self.matrix * u.adjoint()))
    }
}

/// `tr{P e}`.
pub fn born(state: &ProbabilityOperator, e: &Eventuality) -> Result<f64> {
    state.space.ensure_same(e.space())?;
    Ok(trace_product(&state.matrix, e.projector_matrix()))
}

/// `⟨Ψ|e|Ψ⟩` for a pure state, summed over the basis of `e`.
pub fn born_pure(state: &Ket, e: &Eventuality) -> Result<f64> {
    state.space().ensure_same(e.space())?;
    Ok(e.basis()
        .iter()
        .map(|b| b.dotc(state.components()).norm_sqr())
        .sum())
}

/// Real part of `tr{A B}` without forming the product.
fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = c(0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc.re
}

/// A state to be reduced or decomposed: a unit vector or an operator.
#[derive(Debug, Clone)]
pub enum State {
    Pure(Ket),
    Mixed(ProbabilityOperator),
}

impl State {
    pub fn space(&self) -> &HilbertSpace {
        match self {
            State::Pure(k) => k.space(),
            State::Mixed(p) => p.space(),
        }
    }

    pub fn to_operator(&self, tol: f64) -> Result<ProbabilityOperator> {
        match self {
            State::Pure(k) => ProbabilityOperator::pure(k, tol),
            State::Mixed(p) => Ok(p.clone()),
        }
    }
}

/// Reduced operator on factor `keep`.
///
/// A pure joint state `|Ψ̂⟩ = Σ_a |Φ_a⟩|Ψ_a⟩` is reduced by collecting the
/// relative vectors `|Ψ_a⟩` against the standard basis of the other factors
/// and summing `|Ψ_a⟩⟨Ψ_a|`. Mixed states go through the partial trace.
pub fn reduce_composite(
    state: &State,
    comp: &CompositeSpace,
    keep: usize,
) -> Result<ProbabilityOperator> {
    let kept = comp.factor(keep)?.clone();
    match state {
        State::Pure(psi) => {
            comp.space().ensure_same(psi.space())?;
            let residual = (psi.norm_sqr() - 1.0).abs();
            if residual > STATE_TOL {
                return Err(Error::InvalidState {
                    invariant: "unit norm",
                    residual,
                    tol: STATE_TOL,
                });
            }
            let rest = comp.complementary_dim(keep)?;
            // column a holds the relative vector |Ψ_a⟩
            let mut relative = CMatrix::zeros(kept.dim(), rest);
            for (i, amp) in psi.components().iter().enumerate() {
                let (digit, a) = comp.split_index(i, keep);
                relative[(digit, a)] = *amp;
            }
            let m = relative
                .column_iter()
                .fold(CMatrix::zeros(kept.dim(), kept.dim()), |acc, col| {
                    acc + col * col.adjoint()
                });
            Ok(ProbabilityOperator::trusted(&kept, m))
        }
        State::Mixed(p) => {
            let reduced = comp.partial_trace(&p.operator(), keep)?;
            Ok(ProbabilityOperator::trusted(&kept, reduced.into_entries()))
        }
    }
}

/// Bayesian collapse `P ↦ e P e / tr{P e}`, returning the conditioned
/// operator together with `tr{P e}`.
pub fn collapse(
    state: &ProbabilityOperator,
    e: &Eventuality,
) -> Result<(ProbabilityOperator, f64)> {
    let p = born(state, e)?;
    if p <= ZERO_PROBABILITY_THRESHOLD {
        return Err(Error::ZeroProbability {
            probability: p,
            threshold: ZERO_PROBABILITY_THRESHOLD,
        });
    }
    let proj = e.projector_matrix();
    let sandwiched = proj * &state.matrix * proj;
    Ok((
        ProbabilityOperator::trusted(&state.space, sandwiched * c(1.0 / p)),
        p,
    ))
}

/// Joint probabilities `P_ij = tr{P̂ ê_i f̂_j}` of two commuting observables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointProbabilityMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: DMatrix<f64>,
}

impl JointProbabilityMatrix {
    pub fn total(&self) -> f64 {
        self.entries.sum()
    }

    pub fn row_marginals(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.sum()).collect()
    }

    pub fn col_marginals(&self) -> Vec<f64> {
        self.entries.column_iter().map(|c| c.sum()).collect()
    }

    /// Σ_{i≠j} P_ij; only meaningful for square matrices.
    pub fn off_diagonal_mass(&self) -> f64 {
        let mut mass = 0.0;
        for i in 0..self.entries.nrows() {
            for j in 0..self.entries.ncols() {
                if i != j {
                    mass += self.entries[(i, j)];
                }
            }
        }
        mass
    }
}

fn joint_entries(
    state: &ProbabilityOperator,
    rows: &Observable,
    cols: &Observable,
) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        let product = rows.channels()[i].projector_matrix() * cols.channels()[j].projector_matrix();
        trace_product(&state.matrix, &product)
    })
}

/// Joint probability matrix of a sensor {e} (rows) and a target {f}
/// (columns). Channels must commute within `tol`.
pub fn joint_matrix(
    state: &ProbabilityOperator,
    rows: &Observable,
    cols: &Observable,
    tol: f64,
) -> Result<JointProbabilityMatrix> {
    state.space.ensure_same(rows.space())?;
    rows.ensure_commutes(cols, tol)?;
    Ok(JointProbabilityMatrix {
        row_labels: rows.labels().to_vec(),
        col_labels: cols.labels().to_vec(),
        entries: joint_entries(state, rows, cols),
    })
}

/// `P_[i]{f_j} = tr{P̂_[i] f̂_j}` for each channel of `target`.
pub fn conditional(
    state: &ProbabilityOperator,
    given: &Eventuality,
    target: &Observable,
) -> Result<Vec<f64>> {
    let (conditioned, _) = collapse(state, given)?;
    target
        .channels()
        .iter()
        .map(|f| born(&conditioned, f))
        .collect()
}

/// Luder's rule: the provisional operator `Σ_i e_i P e_i`.
pub fn luder(state: &ProbabilityOperator, obs: &Observable) -> Result<ProbabilityOperator> {
    state.space.ensure_same(obs.space())?;
    let n = state.space.dim();
    let m = obs.channels().iter().fold(CMatrix::zeros(n, n), |acc, e| {
        let p = e.projector_matrix();
        acc + p * &state.matrix * p
    });
    Ok(ProbabilityOperator::trusted(&state.space, m))
}

/// One channel of a [`BranchDecomposition`].
#[derive(Debug, Clone)]
pub struct Branch {
    pub label: String,
    /// `P_i = tr{P e_i}`.
    pub probability: f64,
    /// `P_[i]`, absent when `P_i` is at or below the zero-probability threshold.
    pub posterior: Option<ProbabilityOperator>,
    /// `|Ψ_i⟩ = e_i|Ψ⟩` for pure inputs.
    pub vector: Option<Ket>,
}

impl Branch {
    pub fn is_zero(&self) -> bool {
        self.posterior.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct BranchDecomposition {
    pub branches: Vec<Branch>,
}

impl BranchDecomposition {
    pub fn probabilities(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.probability).collect()
    }

    /// Reassembles `Σ_i P_i P_[i]`, which equals Luder's provisional operator.
    pub fn recombine(&self) -> Option<ProbabilityOperator> {
        let first = self.branches.iter().find_map(|b| b.posterior.as_ref())?;
        let n = first.space.dim();
        let m = self
            .branches
            .iter()
            .filter_map(|b| b.posterior.as_ref().map(|p| &p.matrix * c(b.probability)))
            .fold(CMatrix::zeros(n, n), |acc, m| acc + m);
        Some(ProbabilityOperator::trusted(&first.space, m))
    }
}

/// Splits a state into alternative projections onto the channels of `obs`.
pub fn branch_decompose(state: &State, obs: &Observable) -> Result<BranchDecomposition> {
    obs.space().ensure_same(state.space())?;
    let operator = state.to_operator(STATE_TOL)?;
    let mut branches = Vec::with_capacity(obs.len());
    for (label, e) in obs.iter() {
        let vector = match state {
            State::Pure(psi) => Some(e.projector().apply(psi)?),
            State::Mixed(_) => None,
        };
        let (probability, posterior) = match collapse(&operator, e) {
            Ok((post, p)) => (p, Some(post)),
            Err(Error::ZeroProbability { probability, .. }) => (probability, None),
            Err(other) => return Err(other),
        };
        branches.push(Branch {
            label: label.to_string(),
            probability,
            posterior,
            vector,
        });
    }
    Ok(BranchDecomposition { branches })
}

/// Channel-count match, off-diagonal mass and conditional-matrix deviation
/// for a sensor {e} meant to register a target {f}.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub row_channels: usize,
    pub col_channels: usize,
    pub commuting: bool,
    pub off_diagonal_mass: Option<f64>,
    /// `max_ij |P_[i]{f_j} − δ_ij|` over rows with non-zero probability.
    pub conditional_deviation: Option<f64>,
    pub tol: f64,
    pub adequately_correlated: bool,
}

impl CorrelationReport {
    pub fn counts_match(&self) -> bool {
        self.row_channels == self.col_channels
    }
}

/// Diagnoses whether {e} adequately registers {f}: both observables must
/// have the same channel count, commute, and keep both the off-diagonal
/// mass and the deviation of `P_[i]{f_j}` from `δ_ij` within `tol`.
pub fn correlation_check(
    state: &ProbabilityOperator,
    rows: &Observable,
    cols: &Observable,
    tol: f64,
) -> Result<CorrelationReport> {
    state.space.ensure_same(rows.space())?;
    let (residual, _) = rows.commutation_residual(cols)?;
    let commuting = residual <= tol.max(crate::hilbert::DEFAULT_TOL);
    let mut report = CorrelationReport {
        row_channels: rows.len(),
        col_channels: cols.len(),
        commuting,
        off_diagonal_mass: None,
        conditional_deviation: None,
        tol,
        adequately_correlated: false,
    };
    if !report.counts_match() || !commuting {
        return Ok(report);
    }
    let joint = JointProbabilityMatrix {
        row_labels: rows.labels().to_vec(),
        col_labels: cols.labels().to_vec(),
        entries: joint_entries(state, rows, cols),
    };
    let off = joint.off_diagonal_mass();
    let mut deviation: f64 = 0.0;
    for (i, marginal) in joint.row_marginals().into_iter().enumerate() {
        if marginal <= ZERO_PROBABILITY_THRESHOLD {
            continue;
        }
        for j in 0..cols.len() {
            let delta = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((joint.entries[(i, j)] / marginal - delta).abs());
        }
    }
    report.off_diagonal_mass = Some(off);
    report.conditional_deviation = Some(deviation);
    report.adequately_correlated = off <= tol && deviation <= tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn space(label: &str, dim: usize) -> HilbertSpace {
        HilbertSpace::new(label, dim).unwrap()
    }

    fn z_basis(h: &HilbertSpace) -> Observable {
        Observable::standard_basis(h)
    }

    fn two_qubits() -> (CompositeSpace, Observable, Observable) {
        let a = space("a", 2);
        let b = space("b", 2);
        let comp = CompositeSpace::new(vec![a.clone(), b.clone()]).unwrap();
        let ea = z_basis(&a).lift(&comp, 0).unwrap();
        let fb = z_basis(&b).lift(&comp, 1).unwrap();
        (comp, ea, fb)
    }

    fn cat_box_state(comp: &CompositeSpace) -> ProbabilityOperator {
        ProbabilityOperator::from_diagonal(comp.space(), &[0.45, 0.05, 0.0, 0.5], STATE_TOL)
            .unwrap()
    }

    #[test]
    fn invalid_operators_rejected() {
        let h = space("h", 2);
        let bad_trace = Operator::from_real_diagonal(&h, &[0.5, 0.4]).unwrap();
        assert!(matches!(
            ProbabilityOperator::new(bad_trace, STATE_TOL),
            Err(Error::InvalidState {
                invariant: "unit trace",
                ..
            })
        ));
        let negative = Operator::from_real_diagonal(&h, &[1.5, -0.5]).unwrap();
        assert!(matches!(
            ProbabilityOperator::new(negative, STATE_TOL),
            Err(Error::InvalidState {
                invariant: "positive semidefinite",
                ..
            })
        ));
        let skew = Operator::from_real_rows(&h, &[&[0.5, 0.1], &[0.0, 0.5]]).unwrap();
        assert!(matches!(
            ProbabilityOperator::new(skew, STATE_TOL),
            Err(Error::InvalidState {
                invariant: "hermitian",
                ..
            })
        ));
    }

    #[test]
    fn born_isotropic() {
        let h = space("h", 2);
        let p = ProbabilityOperator::maximally_mixed(&h);
        let plus =
            Eventuality::from_vectors(&h, &[Ket::from_real(&h, &[S, S]).unwrap()], 1e-10).unwrap();
        assert!((born(&p, &plus).unwrap() - 0.5).abs() < 1e-15);
        assert!((born(&p, &Eventuality::certain(&h)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(born(&p, &Eventuality::null(&h)).unwrap(), 0.0);
    }

    #[test]
    fn born_pure_matches_operator_path() {
        let h = space("h", 2);
        let psi = Ket::from_real(&h, &[S, S]).unwrap();
        let e0 = Eventuality::from_basis_indices(&h, &[0]).unwrap();
        let pure = born_pure(&psi, &e0).unwrap();
        let mixed = born(&ProbabilityOperator::pure(&psi, 1e-12).unwrap(), &e0).unwrap();
        assert!((pure - 0.5).abs() < 1e-15);
        assert!((pure - mixed).abs() < 1e-12);
    }

    #[test]
    fn born_space_mismatch() {
        let p = ProbabilityOperator::maximally_mixed(&space("h", 2));
        let e = Eventuality::certain(&space("k", 2));
        assert!(matches!(born(&p, &e), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn reduce_bell_and_product() {
        let (comp, _, _) = two_qubits();
        let bell = Ket::from_real(comp.space(), &[S, 0.0, 0.0, S]).unwrap();
        let reduced = reduce_composite(&State::Pure(bell), &comp, 0).unwrap();
        assert!(
            reduced.distance(&ProbabilityOperator::maximally_mixed(
                comp.factor(0).unwrap()
            )) < 1e-15
        );

        let product = Ket::from_real(comp.space(), &[0.6, 0.8, 0.0, 0.0]).unwrap();
        let reduced = reduce_composite(&State::Pure(product), &comp, 0).unwrap();
        let up = ProbabilityOperator::from_diagonal(comp.factor(0).unwrap(), &[1.0, 0.0], 1e-12)
            .unwrap();
        assert!(reduced.distance(&up) < 1e-15);
    }

    #[test]
    fn collapse_examples() {
        let h = space("h", 2);
        let iso = ProbabilityOperator::maximally_mixed(&h);
        let e0 = Eventuality::from_basis_indices(&h, &[0]).unwrap();
        let (post, p) = collapse(&iso, &e0).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let up = ProbabilityOperator::from_diagonal(&h, &[1.0, 0.0], 1e-12).unwrap();
        assert!(post.distance(&up) < 1e-15);
        let (again, p) = collapse(&post, &e0).unwrap();
        assert!((p - 1.0).abs() < 1e-15 && again.distance(&post) < 1e-15);

        let (comp, ea, _) = two_qubits();
        let (post, p) = collapse(&cat_box_state(&comp), &ea.channels()[0]).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let expected =
            ProbabilityOperator::from_diagonal(comp.space(), &[0.9, 0.1, 0.0, 0.0], 1e-12).unwrap();
        assert!(post.distance(&expected) < 1e-15);
    }

    #[test]
    fn collapse_on_zero_probability_fails_loudly() {
        let h = space("h", 2);
        let up = ProbabilityOperator::from_diagonal(&h, &[1.0, 0.0], 1e-12).unwrap();
        let e1 = Eventuality::from_basis_indices(&h, &[1]).unwrap();
        assert!(matches!(
            collapse(&up, &e1),
            Err(Error::ZeroProbability { threshold, .. }) if threshold == ZERO_PROBABILITY_THRESHOLD
        ));
    }

    #[test]
    fn joint_and_conditional_examples() {
        let (comp, ea, fb) = two_qubits();
        let perfect =
            ProbabilityOperator::from_diagonal(comp.space(), &[0.5, 0.0, 0.0, 0.5], 1e-12).unwrap();
        let j = joint_matrix(&perfect, &ea, &fb, 1e-10).unwrap();
        assert_eq!(
            j.entries,
            DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5])
        );
        assert_eq!(
            conditional(&perfect, &ea.channels()[0], &fb).unwrap(),
            vec![1.0, 0.0]
        );

        let state = cat_box_state(&comp);
        let j = joint_matrix(&state, &ea, &fb, 1e-10).unwrap();
        let expected = [0.45, 0.05, 0.0, 0.5];
        for (v, e) in j.entries.transpose().iter().zip(expected) {
            assert!((v - e).abs() < 1e-15);
        }
        let cond = conditional(&state, &ea.channels()[0], &fb).unwrap();
        assert!((cond[0] - 0.9).abs() < 1e-15 && (cond[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn joint_rejects_non_commuting() {
        let h = space("h", 2);
        let z = z_basis(&h);
        let x = Observable::new(
            &h,
            vec![
                (
                    "+",
                    Eventuality::from_vectors(&h, &[Ket::from_real(&h, &[S, S]).unwrap()], 1e-10)
                        .unwrap(),
                ),
                (
                    "-",
                    Eventuality::from_vectors(&h, &[Ket::from_real(&h, &[S, -S]).unwrap()], 1e-10)
                        .unwrap(),
                ),
            ],
            1e-10,
        )
        .unwrap();
        let iso = ProbabilityOperator::maximally_mixed(&h);
        assert!(matches!(
            joint_matrix(&iso, &z, &x, 1e-10),
            Err(Error::NonCommuting { .. })
        ));
    }

    #[test]
    fn luder_examples() {
        let h = space("h", 2);
        let plus = ProbabilityOperator::pure(&Ket::from_real(&h, &[S, S]).unwrap(), 1e-12).unwrap();
        let out = luder(&plus, &z_basis(&h)).unwrap();
        assert!(out.distance(&ProbabilityOperator::maximally_mixed(&h)) < 1e-15);

        let diag = ProbabilityOperator::from_diagonal(&h, &[0.3, 0.7], 1e-12).unwrap();
        assert!(luder(&diag, &z_basis(&h)).unwrap().distance(&diag) < 1e-15);
    }

    #[test]
    fn branch_examples() {
        let h = space("h", 2);
        let psi = Ket::from_real(&h, &[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]).unwrap();
        let d = branch_decompose(&State::Pure(psi.clone()), &z_basis(&h)).unwrap();
        let p = d.probabilities();
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15 && (p[1] - 2.0 / 3.0).abs() < 1e-15);
        let sum = d
            .branches
            .iter()
            .map(|b| b.vector.as_ref().unwrap().components().clone())
            .reduce(|a, b| a + b)
            .unwrap();
        assert!((sum - psi.components()).norm() < 1e-15);

        let plus = Ket::from_real(&h, &[S, S]).unwrap();
        let x = QuantitativeX::observable(&h);
        let d = branch_decompose(&State::Pure(plus), &x).unwrap();
        assert!((d.branches[0].probability - 1.0).abs() < 1e-15);
        assert!(d.branches[1].is_zero());
    }

    struct QuantitativeX;
    impl QuantitativeX {
        fn observable(h: &HilbertSpace) -> Observable {
            let line = |xs: &[f64]| {
                Eventuality::from_vectors(h, &[Ket::from_real(h, xs).unwrap()], 1e-10).unwrap()
            };
            Observable::new(h, vec![("+", line(&[S, S])), ("-", line(&[S, -S]))], 1e-10).unwrap()
        }
    }

    #[test]
    fn correlation_examples() {
        let (comp, ea, fb) = two_qubits();
        let perfect =
            ProbabilityOperator::from_diagonal(comp.space(), &[0.5, 0.0, 0.0, 0.5], 1e-12).unwrap();
        let r = correlation_check(&perfect, &ea, &fb, 1e-10).unwrap();
        assert!(r.adequately_correlated);
        assert_eq!(r.off_diagonal_mass, Some(0.0));

        let r = correlation_check(&cat_box_state(&comp), &ea, &fb, 0.01).unwrap();
        assert!(!r.adequately_correlated);
        assert!((r.off_diagonal_mass.unwrap() - 0.05).abs() < 1e-15);

        let a = space("a", 2);
        let b = space("b", 4);
        let comp = CompositeSpace::new(vec![a.clone(), b.clone()]).unwrap();
        let ea = z_basis(&a).lift(&comp, 0).unwrap();
        let fb = z_basis(&b).lift(&comp, 1).unwrap();
        let iso = ProbabilityOperator::maximally_mixed(comp.space());
        let r = correlation_check(&iso, &ea, &fb, 0.5).unwrap();
        assert!(!r.counts_match() && !r.adequately_correlated);
    }

    #[test]
    fn transport_examples() {
        let h = space("h", 2);
        let x = Operator::from_real_rows(&h, &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let p = ProbabilityOperator::from_diagonal(&h, &[0.8, 0.2], 1e-12).unwrap();
        let e0 = Eventuality::from_basis_indices(&h, &[0]).unwrap();
        let schroedinger = born(&p.evolve(&x, 1e-10).unwrap(), &e0).unwrap();
        let heisenberg = born(&p, &e0.transport(&x, 1e-10).unwrap()).unwrap();
        assert!((schroedinger - 0.2).abs() < 1e-15);
        assert!((schroedinger - heisenberg).abs() < 1e-15);
        let obs = z_basis(&h).transport(&x, 1e-10).unwrap();
        assert!(obs.validate(1e-10).passed());
    }
}
