//! Scenario files: the JSON schema, the shipped presets, and assembly of a
//! validated engine model.
//!
//! Complex numbers are written as `[re, im]` pairs. A scenario with a
//! `composite` puts its state on the product of the listed factors in the
//! listed order (first factor slowest); observables may live on a factor or
//! on the composite itself.

use std::collections::BTreeSet;
use std::path::Path;

use eventuality::anthropic::{LifetimeProfile, Segment};
use eventuality::hilbert::{CMatrix, CVector, Structure};
use eventuality::{
    AnthropicScheme, ClassicalModel, CompositeSpace, Eventuality, HilbertSpace, Ket, LogBase,
    Observable, ObserverModel, Operator, ProbabilityOperator, QuantitativeObservable,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const PRESET_NAMES: [&str; 4] = ["coin", "stern-gerlach", "cat-box", "cat-master"];

const COIN: &str = include_str!("../scenarios/coin.json");
const STERN_GERLACH: &str = include_str!("../scenarios/stern-gerlach.json");
const CAT_BOX: &str = include_str!("../scenarios/cat-box.json");
const CAT_MASTER: &str = include_str!("../scenarios/cat-master.json");

/// Raw JSON text of a shipped preset.
pub fn preset_source(name: &str) -> Option<&'static str> {
    match name {
        "coin" => Some(COIN),
        "stern-gerlach" => Some(STERN_GERLACH),
        "cat-box" => Some(CAT_BOX),
        "cat-master" => Some(CAT_MASTER),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub spaces: Vec<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composite: Option<CompositeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default)]
    pub observables: Vec<ObservableSpec>,
    #[serde(default)]
    pub observers: Vec<ObserverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighting: Option<WeightingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub id: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    /// Weights of a state diagonal in the standard basis.
    Diagonal(Vec<f64>),
    /// A pure state vector.
    Vector(Vec<[f64; 2]>),
    /// A full density matrix, row-major.
    Density(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub id: String,
    pub space: String,
    pub channels: Vec<ChannelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// A channel is given either by standard basis indices or by spanning vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSpec {
    pub id: String,
    pub observable: String,
    pub lifetime: f64,
    pub perception_duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<SegmentSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub duration: f64,
    pub capacity: f64,
    pub perception_duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Weak,
    Proper,
    Entropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightingSpec {
    pub scheme: SchemeName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSpec {
    pub points: Vec<String>,
    pub measure: Vec<f64>,
    #[serde(default)]
    pub events: Vec<EventSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSpec {
    pub label: String,
    pub members: Vec<String>,
}

/// Where a scenario came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Preset(String),
    File(String),
}

/// Parses scenario text, reporting the JSON position on failure.
pub fn parse(text: &str, source_name: &str) -> Result<ScenarioFile> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Reads and fully validates a preset or a scenario file.
pub fn load_scenario(source: &Source, tol: f64) -> Result<Scenario> {
    let (text, name) = match source {
        Source::Preset(name) => (
            preset_source(name)
                .ok_or_else(|| CliError::UnknownPreset(name.clone()))?
                .to_string(),
            format!("preset `{name}`"),
        ),
        Source::File(path) => (
            std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Io {
                path: path.clone(),
                message: e.to_string(),
            })?,
            format!("`{path}`"),
        ),
    };
    Scenario::build(parse(&text, &name)?, tol)
}

/// The composite factorization declared by a scenario.
#[derive(Debug, Clone)]
pub struct CompositeInfo {
    pub id: String,
    pub factor_ids: Vec<String>,
    pub space: CompositeSpace,
}

/// An observable together with its lift to the state space.
#[derive(Debug, Clone)]
pub struct ScenarioObservable {
    pub id: String,
    pub space_id: String,
    /// Factor index when the observable lives on one composite factor.
    pub factor: Option<usize>,
    pub local: Observable,
    pub global: Observable,
    pub quantitative: Option<QuantitativeObservable>,
}

#[derive(Debug, Clone)]
pub struct ScenarioObserver {
    pub id: String,
    /// Index into [`Scenario::observables`].
    pub observable: usize,
    pub lifetime: f64,
    pub perception_duration: f64,
    pub profile: Option<LifetimeProfile>,
}

#[derive(Debug, Clone)]
pub struct ClassicalScenario {
    pub model: ClassicalModel,
    pub events: Vec<(String, Vec<String>)>,
}

/// A fully validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub spaces: Vec<(String, HilbertSpace)>,
    pub composite: Option<CompositeInfo>,
    /// Space carrying the state and every lifted observable.
    pub state_space: Option<HilbertSpace>,
    pub state: Option<ProbabilityOperator>,
    /// Set when the state was given as a vector.
    pub pure: Option<Ket>,
    pub observables: Vec<ScenarioObservable>,
    pub observers: Vec<ScenarioObserver>,
    pub scheme: SchemeName,
    pub classical: Option<ClassicalScenario>,
    pub tol: f64,
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl Scenario {
    pub fn build(file: ScenarioFile, tol: f64) -> Result<Self> {
        let spaces = build_spaces(&file)?;
        let composite = build_composite(&file, &spaces)?;
        let state_space = match (&composite, spaces.as_slice()) {
            (Some(c), _) => Some(c.space.space().clone()),
            (None, []) => None,
            (None, [(_, only)]) => Some(only.clone()),
            (None, _) => {
                return Err(CliError::schema(
                    "spaces",
                    "state space resolution",
                    "several spaces need a `composite` declaring their factor order",
                ))
            }
        };
        let (state, pure) = build_state(&file, state_space.as_ref(), tol)?;
        let observables = file
            .observables
            .iter()
            .map(|spec| {
                build_observable(spec, &spaces, composite.as_ref(), state_space.as_ref(), tol)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ids = BTreeSet::new();
        for o in &observables {
            if !ids.insert(o.id.as_str()) {
                return Err(CliError::schema(
                    format!("observable `{}`", o.id),
                    "unique identifiers",
                    "declared twice",
                ));
            }
        }
        let scheme = file
            .weighting
            .map(|w| w.scheme)
            .unwrap_or(SchemeName::Entropic);
        let observers = build_observers(&file, &observables, scheme)?;
        let classical = build_classical(&file)?;
        Ok(Self {
            file,
            spaces,
            composite,
            state_space,
            state,
            pure,
            observables,
            observers,
            scheme,
            classical,
            tol,
        })
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn observable(&self, id: &str) -> Result<&ScenarioObservable> {
        self.observables.iter().find(|o| o.id == id).ok_or_else(|| {
            CliError::Usage(format!(
                "no observable `{id}` in scenario `{}` (declared: {})",
                self.name(),
                self.observables
                    .iter()
                    .map(|o| o.id.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })
    }

    pub fn anthropic_scheme(&self, log_base: LogBase) -> AnthropicScheme {
        match self.scheme {
            SchemeName::Weak => AnthropicScheme::Weak,
            SchemeName::Proper => AnthropicScheme::Proper,
            SchemeName::Entropic => AnthropicScheme::Entropic { log_base },
        }
    }

    /// Observer models in declaration order. Channel counts come from each
    /// observer's observable on its own factor space.
    pub fn observer_models(&self) -> Result<Vec<ObserverModel>> {
        self.observers
            .iter()
            .map(|o| observer_model(o, &self.observables[o.observable], self.scheme))
            .collect()
    }

    /// Basis labels of the state space: `|i⟩`, or `|i,j,…⟩` over a composite.
    pub fn basis_labels(&self) -> Vec<String> {
        let Some(space) = &self.state_space else {
            return Vec::new();
        };
        match &self.composite {
            Some(c) if c.space.factors().len() > 1 => {
                let dims: Vec<usize> = c.space.factors().iter().map(|f| f.dim()).collect();
                (0..space.dim())
                    .map(|mut i| {
                        let mut digits = vec![0; dims.len()];
                        for (k, d) in dims.iter().enumerate().rev() {
                            digits[k] = i % d;
                            i /= d;
                        }
                        let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                        format!("|{}⟩", parts.join(","))
                    })
                    .collect()
            }
            _ => (0..space.dim()).map(|i| format!("|{i}⟩")).collect(),
        }
    }
}

fn observer_model(
    spec: &ScenarioObserver,
    obs: &ScenarioObservable,
    scheme: SchemeName,
) -> Result<ObserverModel> {
    let object = format!("observer `{}`", spec.id);
    match scheme {
        SchemeName::Entropic => ObserverModel::from_observable(
            &spec.id,
            &obs.local,
            spec.lifetime,
            spec.perception_duration,
        )
        .map_err(CliError::engine(object)),
        // the channel capacity is not consulted outside the entropic scheme
        SchemeName::Weak | SchemeName::Proper => ObserverModel::new(
            &spec.id,
            obs.local.space().dim(),
            obs.local.ranks().into_iter().min().unwrap_or(1),
            spec.lifetime,
            spec.perception_duration,
        )
        .map_err(CliError::engine(object)),
    }
}

fn build_spaces(file: &ScenarioFile) -> Result<Vec<(String, HilbertSpace)>> {
    let mut out: Vec<(String, HilbertSpace)> = Vec::new();
    for s in &file.spaces {
        if out.iter().any(|(id, _)| *id == s.id) {
            return Err(CliError::schema(
                format!("space `{}`", s.id),
                "unique identifiers",
                "declared twice",
            ));
        }
        let space = HilbertSpace::new(&s.id, s.dim).map_err(|e| {
            CliError::schema(
                format!("space `{}`", s.id),
                "positive dimension",
                e.to_string(),
            )
        })?;
        out.push((s.id.clone(), space));
    }
    Ok(out)
}

fn lookup_space<'a>(
    spaces: &'a [(String, HilbertSpace)],
    id: &str,
    object: &str,
) -> Result<&'a HilbertSpace> {
    spaces
        .iter()
        .find(|(sid, _)| sid == id)
        .map(|(_, s)| s)
        .ok_or_else(|| {
            CliError::schema(
                object,
                "reference resolution",
                format!("unknown space `{id}`"),
            )
        })
}

fn build_composite(
    file: &ScenarioFile,
    spaces: &[(String, HilbertSpace)],
) -> Result<Option<CompositeInfo>> {
    let Some(spec) = &file.composite else {
        return Ok(None);
    };
    if spec.factors.is_empty() {
        return Err(CliError::schema(
            "composite",
            "factor list",
            "no factors listed",
        ));
    }
    let distinct: BTreeSet<&String> = spec.factors.iter().collect();
    if distinct.len() != spec.factors.len() {
        return Err(CliError::schema(
            "composite",
            "factor list",
            "a space appears more than once",
        ));
    }
    let factors = spec
        .factors
        .iter()
        .map(|id| lookup_space(spaces, id, "composite").cloned())
        .collect::<Result<Vec<_>>>()?;
    if let Some((id, _)) = spaces.iter().find(|(id, _)| !spec.factors.contains(id)) {
        return Err(CliError::schema(
            "composite",
            "factor list",
            format!("space `{id}` is not a factor of the composite"),
        ));
    }
    let id = spec.id.clone().unwrap_or_else(|| spec.factors.join("⊗"));
    if spaces.iter().any(|(sid, _)| *sid == id) {
        return Err(CliError::schema(
            "composite",
            "unique identifiers",
            format!("composite id `{id}` collides with a space"),
        ));
    }
    let space = CompositeSpace::new(factors).map_err(CliError::engine("composite"))?;
    Ok(Some(CompositeInfo {
        id,
        factor_ids: spec.factors.clone(),
        space,
    }))
}

fn build_state(
    file: &ScenarioFile,
    space: Option<&HilbertSpace>,
    tol: f64,
) -> Result<(Option<ProbabilityOperator>, Option<Ket>)> {
    let (spec, space) = match (&file.state, space) {
        (None, None) => return Ok((None, None)),
        (Some(_), None) => {
            return Err(CliError::schema(
                "state",
                "state space resolution",
                "no spaces declared",
            ))
        }
        (None, Some(_)) => {
            return Err(CliError::schema(
                "state",
                "required field",
                "quantum scenarios need a state",
            ))
        }
        (Some(spec), Some(space)) => (spec, space),
    };
    let n = space.dim();
    let length = |got: usize| {
        CliError::schema(
            "state",
            "dimension",
            format!("expected {n} entries for {space}, got {got}"),
        )
    };
    match spec {
        StateSpec::Diagonal(weights) => {
            if weights.len() != n {
                return Err(length(weights.len()));
            }
            let p = ProbabilityOperator::from_diagonal(space, weights, tol)
                .map_err(CliError::engine("state"))?;
            Ok((Some(p), None))
        }
        StateSpec::Vector(amplitudes) => {
            if amplitudes.len() != n {
                return Err(length(amplitudes.len()));
            }
            let v = CVector::from_iterator(n, amplitudes.iter().map(complex));
            let ket = Ket::state(space, v, tol).map_err(CliError::engine("state"))?;
            let p = ProbabilityOperator::pure(&ket, tol).map_err(CliError::engine("state"))?;
            Ok((Some(p), Some(ket)))
        }
        StateSpec::Density(rows) => {
            if rows.len() != n {
                return Err(length(rows.len()));
            }
            if let Some(row) = rows.iter().find(|r| r.len() != n) {
                return Err(length(row.len()));
            }
            let m = CMatrix::from_fn(n, n, |i, j| complex(&rows[i][j]));
            let op = Operator::new(space, m).map_err(CliError::engine("state"))?;
            let p = ProbabilityOperator::new(op, tol).map_err(CliError::engine("state"))?;
            Ok((Some(p), None))
        }
    }
}

fn build_observable(
    spec: &ObservableSpec,
    spaces: &[(String, HilbertSpace)],
    composite: Option<&CompositeInfo>,
    state_space: Option<&HilbertSpace>,
    tol: f64,
) -> Result<ScenarioObservable> {
    let object = format!("observable `{}`", spec.id);
    let (space, factor) = match composite {
        Some(c) if c.id == spec.space => (c.space.space().clone(), None),
        Some(c) => {
            let space = lookup_space(spaces, &spec.space, &object)?.clone();
            let factor = c.factor_ids.iter().position(|f| *f == spec.space);
            (space, factor)
        }
        None => (lookup_space(spaces, &spec.space, &object)?.clone(), None),
    };
    if spec.channels.is_empty() {
        return Err(CliError::schema(
            &object,
            "channel list",
            "no channels listed",
        ));
    }
    let mut channels = Vec::with_capacity(spec.channels.len());
    for ch in &spec.channels {
        let where_ = format!("{object}, channel `{}`", ch.label);
        let e = match (&ch.basis, &ch.span) {
            (Some(indices), None) => {
                if let Some(&bad) = indices.iter().find(|&&i| i >= space.dim()) {
                    return Err(CliError::schema(
                        where_,
                        "dimension",
                        format!("basis index {bad} outside {space}"),
                    ));
                }
                Eventuality::from_basis_indices(&space, indices)
                    .map_err(CliError::engine(where_))?
            }
            (None, Some(vectors)) => {
                let kets = vectors
                    .iter()
                    .map(|v| {
                        if v.len() != space.dim() {
                            return Err(CliError::schema(
                                where_.clone(),
                                "dimension",
                                format!("spanning vector of length {} in {space}", v.len()),
                            ));
                        }
                        Ket::from_slice(&space, &v.iter().map(complex).collect::<Vec<_>>())
                            .map_err(CliError::engine(where_.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Eventuality::from_vectors(&space, &kets, tol).map_err(CliError::engine(where_))?
            }
            _ => {
                return Err(CliError::schema(
                    where_,
                    "channel form",
                    "give exactly one of `basis` or `span`",
                ))
            }
        };
        channels.push((ch.label.clone(), e));
    }
    let report = eventuality::observable::validate_family(
        &space,
        &channels.iter().map(|(_, e)| e.clone()).collect::<Vec<_>>(),
        tol,
    )
    .map_err(CliError::engine(&object))?;
    if let Some(violation) = report.violation() {
        let invariant = if report.null_channel.is_some() {
            "non-null channels"
        } else if report.orthogonality_residual > tol {
            "orthogonality"
        } else {
            "completeness"
        };
        return Err(CliError::Invalid {
            object,
            invariant,
            detail: violation,
        });
    }
    let local = Observable::new(&space, channels, tol).map_err(CliError::engine(&object))?;
    let global = match (composite, factor) {
        (Some(c), Some(k)) => local.lift(&c.space, k).map_err(CliError::engine(&object))?,
        _ => local.clone(),
    };
    if let Some(ss) = state_space {
        if global.space() != ss {
            return Err(CliError::schema(
                &object,
                "reference resolution",
                format!("space `{}` is not part of the state space {ss}", spec.space),
            ));
        }
    }
    let quantitative = match &spec.values {
        None => None,
        Some(values) => {
            if values.len() != local.len() {
                return Err(CliError::schema(
                    &object,
                    "dimension",
                    format!("{} values for {} channels", values.len(), local.len()),
                ));
            }
            Some(
                QuantitativeObservable::new(global.clone(), values.clone())
                    .map_err(CliError::engine(&object))?,
            )
        }
    };
    Ok(ScenarioObservable {
        id: spec.id.clone(),
        space_id: spec.space.clone(),
        factor,
        local,
        global,
        quantitative,
    })
}

fn build_observers(
    file: &ScenarioFile,
    observables: &[ScenarioObservable],
    scheme: SchemeName,
) -> Result<Vec<ScenarioObserver>> {
    let mut out: Vec<ScenarioObserver> = Vec::new();
    for spec in &file.observers {
        let object = format!("observer `{}`", spec.id);
        if out.iter().any(|o| o.id == spec.id) {
            return Err(CliError::schema(
                object,
                "unique identifiers",
                "declared twice",
            ));
        }
        let observable = observables
            .iter()
            .position(|o| o.id == spec.observable)
            .ok_or_else(|| {
                CliError::schema(
                    &object,
                    "reference resolution",
                    format!("unknown observable `{}`", spec.observable),
                )
            })?;
        let profile = spec
            .profile
            .as_ref()
            .map(|segments| {
                LifetimeProfile::new(
                    segments
                        .iter()
                        .map(|s| Segment {
                            duration: s.duration,
                            capacity: s.capacity,
                            perception_duration: s.perception_duration,
                        })
                        .collect(),
                )
                .map_err(CliError::engine(&object))
            })
            .transpose()?;
        let observer = ScenarioObserver {
            id: spec.id.clone(),
            observable,
            lifetime: spec.lifetime,
            perception_duration: spec.perception_duration,
            profile,
        };
        observer_model(&observer, &observables[observable], scheme)?;
        out.push(observer);
    }
    Ok(out)
}

fn build_classical(file: &ScenarioFile) -> Result<Option<ClassicalScenario>> {
    let Some(spec) = &file.classical else {
        return Ok(None);
    };
    let model = ClassicalModel::new(spec.points.clone(), spec.measure.clone())
        .map_err(CliError::engine("classical model"))?;
    let mut events = Vec::with_capacity(spec.events.len());
    for e in &spec.events {
        model.event(&e.members).map_err(|err| {
            CliError::schema(
                format!("classical event `{}`", e.label),
                "reference resolution",
                err.to_string(),
            )
        })?;
        events.push((e.label.clone(), e.members.clone()));
    }
    Ok(Some(ClassicalScenario { model, events }))
}

/// Residuals of every state invariant, for display.
pub fn state_residuals(p: &ProbabilityOperator, tol: f64) -> [(&'static str, f64); 3] {
    let op = p.operator();
    let hermitian = op.structure_check(Structure::Hermitian, tol).residual;
    let trace = (op.trace() - Complex64::new(1.0, 0.0)).norm();
    let psd = op
        .structure_check(Structure::PositiveSemidefinite, tol)
        .residual;
    [
        ("hermitian", hermitian),
        ("unit trace", trace),
        ("positive semidefinite", psd),
    ]
}
