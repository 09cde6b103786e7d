//! Observables: complete families of mutually orthogonal eventualities,
//! optionally decorated with distinct real values.

use crate::error::{Error, Result};
use crate::hilbert::{
    c, hermitian_eigen, max_abs, CMatrix, CVector, CompositeSpace, HilbertSpace, Operator,
    Structure, DEFAULT_TOL,
};
use crate::lattice::Eventuality;
use crate::probability::ProbabilityOperator;

/// Default eigenvalue clustering tolerance for [`QuantitativeObservable::spectral`].
pub const SPECTRAL_TOL: f64 = 1e-8;

/// Residuals of the orthogonality and completeness conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport {
    /// Largest `‖e_i e_j‖_max` over `i ≠ j`.
    pub orthogonality_residual: f64,
    /// The pair attaining `orthogonality_residual`.
    pub worst_pair: Option<(usize, usize)>,
    /// `‖Σ e_i − I‖_max`.
    pub completeness_residual: f64,
    /// Index of the first null channel, if any.
    pub null_channel: Option<usize>,
    pub tol: f64,
}

impl ObservableReport {
    pub fn passed(&self) -> bool {
        self.orthogonality_residual <= self.tol
            && self.completeness_residual <= self.tol
            && self.null_channel.is_none()
    }

    /// A one-line description of the first violated condition.
    pub fn violation(&self) -> Option<String> {
        if let Some(k) = self.null_channel {
            return Some(format!("channel {k} is the null eventuality"));
        }
        if self.orthogonality_residual > self.tol {
            let (i, j) = self.worst_pair.unwrap_or_default();
            return Some(format!(
                "channels {i} and {j} are not orthogonal (residual {:e} > {:e})",
                self.orthogonality_residual, self.tol
            ));
        }
        if self.completeness_residual > self.tol {
            return Some(format!(
                "channels do not sum to the identity (completeness residual {:e} > {:e})",
                self.completeness_residual, self.tol
            ));
        }
        None
    }
}

/// Checks a candidate channel family without constructing an [`Observable`].
pub fn validate_family(
    space: &HilbertSpace,
    channels: &[Eventuality],
    tol: f64,
) -> Result<ObservableReport> {
    for e in channels {
        space.ensure_same(e.space())?;
    }
    let mut orthogonality_residual = 0.0;
    let mut worst_pair = None;
    for (i, a) in channels.iter().enumerate() {
        for (j, b) in channels.iter().enumerate().skip(i + 1) {
            let r = max_abs(&(a.projector_matrix() * b.projector_matrix()));
            if r > orthogonality_residual {
                orthogonality_residual = r;
                worst_pair = Some((i, j));
            }
        }
    }
    let n = space.dim();
    let sum = channels
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, e| acc + e.projector_matrix());
    let completeness_residual = max_abs(&(sum - CMatrix::identity(n, n)));
    Ok(ObservableReport {
        orthogonality_residual,
        worst_pair,
        completeness_residual,
        null_channel: channels.iter().position(Eventuality::is_null),
        tol,
    })
}

/// A qualitative observable {e}.
#[derive(Debug, Clone)]
pub struct Observable {
    space: HilbertSpace,
    channels: Vec<Eventuality>,
    labels: Vec<String>,
}

impl Observable {
    pub fn new<L: Into<String>>(
        space: &HilbertSpace,
        channels: Vec<(L, Eventuality)>,
        tol: f64,
    ) -> Result<Self> {
        let (labels, channels): (Vec<String>, Vec<Eventuality>) =
            channels.into_iter().map(|(l, e)| (l.into(), e)).unzip();
        let report = validate_family(space, &channels, tol)?;
        if let Some(v) = report.violation() {
            return Err(Error::InvalidObservable(v));
        }
        Ok(Self {
            space: space.clone(),
            channels,
            labels,
        })
    }

    /// One rank-1 channel per standard basis vector, labelled by index.
    pub fn standard_basis(space: &HilbertSpace) -> Self {
        let channels = (0..space.dim())
            .map(|i| {
                (
                    i.to_string(),
                    Eventuality::from_basis_indices(space, &[i]).expect("index in range"),
                )
            })
            .collect();
        Self::new(space, channels, DEFAULT_TOL).expect("standard basis is an observable")
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn channels(&self) -> &[Eventuality] {
        &self.channels
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Channel count 𝒩_e.
    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channel(&self, label: &str) -> Option<&Eventuality> {
        self.position(label).map(|i| &self.channels[i])
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Eventuality)> {
        self.labels.iter().map(String::as_str).zip(&self.channels)
    }

    pub fn validate(&self, tol: f64) -> ObservableReport {
        validate_family(&self.space, &self.channels, tol).expect("channels share the space")
    }

    /// Channel ranks in order.
    pub fn ranks(&self) -> Vec<usize> {
        self.channels.iter().map(Eventuality::rank).collect()
    }

    /// The observable with every channel lifted to `comp`.
    pub fn lift(&self, comp: &CompositeSpace, factor: usize) -> Result<Observable> {
        let channels = self
            .channels
            .iter()
            .map(|e| e.lift(comp, factor))
            .collect::<Result<Vec<_>>>()?;
        Ok(Observable {
            space: comp.space().clone(),
            channels,
            labels: self.labels.clone(),
        })
    }

    /// Largest channelwise commutator `‖[e_i, f_j]‖_max`, with its pair.
    pub fn commutation_residual(&self, other: &Observable) -> Result<(f64, (usize, usize))> {
        self.space.ensure_same(&other.space)?;
        let mut worst = (0.0, (0, 0));
        for (i, a) in self.channels.iter().enumerate() {
            for (j, b) in other.channels.iter().enumerate() {
                let (p, q) = (a.projector_matrix(), b.projector_matrix());
                let r = max_abs(&(p * q - q * p));
                if r > worst.0 {
                    worst = (r, (i, j));
                }
            }
        }
        Ok(worst)
    }

    pub(crate) fn ensure_commutes(&self, other: &Observable, tol: f64) -> Result<()> {
        let (residual, (row, col)) = self.commutation_residual(other)?;
        if residual > tol {
            return Err(Error::NonCommuting {
                row,
                col,
                residual,
                tol,
            });
        }
        Ok(())
    }

    /// The conjoint observable {c} with channels `c_ij = e_i ∩ f_j`, labelled
    /// `"{e_i}&{f_j}"` in row-major (i, j) order. Requires channelwise
    /// commutation within `tol`. Null intersections, which cannot occur for
    /// observables lifted from different factors, are dropped.
    pub fn conjoin(&self, other: &Observable, tol: f64) -> Result<Observable> {
        self.ensure_commutes(other, tol)?;
        let mut channels = Vec::new();
        for (la, a) in self.iter() {
            for (lb, b) in other.iter() {
                let m = a.meet(b)?;
                if !m.is_null() {
                    channels.push((format!("{la}&{lb}"), m));
                }
            }
        }
        Observable::new(&self.space, channels, tol.max(DEFAULT_TOL))
    }

    /// Heisenberg-picture transport of every channel.
    pub fn transport(&self, unitary: &Operator, tol: f64) -> Result<Observable> {
        let channels = self
            .channels
            .iter()
            .map(|e| e.transport(unitary, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Observable {
            space: self.space.clone(),
            channels,
            labels: self.labels.clone(),
        })
    }
}

/// An observable whose channels carry pairwise distinct real values.
#[derive(Debug, Clone)]
pub struct QuantitativeObservable {
    base: Observable,
    values: Vec<f64>,
}

impl QuantitativeObservable {
    pub fn new(base: Observable, values: Vec<f64>) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                got: values.len(),
            });
        }
        for (i, a) in values.iter().enumerate() {
            if let Some(j) = values[i + 1..].iter().position(|b| b == a) {
                return Err(Error::DegenerateValues(i, i + 1 + j));
            }
        }
        Ok(Self { base, values })
    }

    pub fn base(&self) -> &Observable {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `E = Σ_i E_i e_i`.
    pub fn operator(&self) -> Operator {
        let n = self.base.space.dim();
        let m = self
            .base
            .channels
            .iter()
            .zip(&self.values)
            .fold(CMatrix::zeros(n, n), |acc, (e, &v)| {
                acc + e.projector_matrix() * c(v)
            });
        Operator::new(&self.base.space, m).expect("dimension matches")
    }

    /// Mean value `⟨E⟩ = tr{P E}`.
    pub fn expectation(&self, state: &ProbabilityOperator) -> Result<f64> {
        self.base.space.ensure_same(state.space())?;
        Ok((state.matrix() * self.operator().entries()).trace().re)
    }

    /// Spectral observable of a Hermitian operator: eigenvalues in
    /// descending order, merged when consecutive values differ by at most
    /// `tol`, with the eigenspaces as channels.
    pub fn spectral(op: &Operator, tol: f64) -> Result<Self> {
        op.structure_check(Structure::Hermitian, tol)
            .into_result()?;
        let (values, vectors) = hermitian_eigen(op.entries());
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for k in 0..values.len() {
            match clusters.last_mut() {
                Some(cl) if values[*cl.last().unwrap()] - values[k] <= tol => cl.push(k),
                _ => clusters.push(vec![k]),
            }
        }
        let space = op.space();
        let mut channels = Vec::with_capacity(clusters.len());
        let mut means = Vec::with_capacity(clusters.len());
        for cl in &clusters {
            let raw: Vec<CVector> = cl.iter().map(|&k| vectors.column(k).into_owned()).collect();
            means.push(cl.iter().map(|&k| values[k]).sum::<f64>() / cl.len() as f64);
            channels.push((
                format!("λ{}", channels.len()),
                Eventuality::from_raw(space, &raw, DEFAULT_TOL),
            ));
        }
        let base = Observable::new(space, channels, tol.max(1e-8))?;
        Self::new(base, means)
    }
}
