//! Command dispatch: each command maps one engine operation onto tables.

use eventuality::anthropic::{entropy_capacity, lifetime_distribution, net_table};
use eventuality::hilbert::CMatrix;
use eventuality::probability::{
    born, branch_decompose, collapse, conditional, correlation_check, joint_matrix, luder,
    CorrelationReport, ZERO_PROBABILITY_THRESHOLD,
};
use eventuality::{AnthropicScheme, ClassicalEventuality, LogBase, ProbabilityOperator, State};

use crate::error::{CliError, Result};
use crate::render::{Cell, RenderedTable, Report};
use crate::scenario::{state_residuals, ClassicalScenario, Scenario, ScenarioObservable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Validate the scenario and report every invariant residual.
    Validate,
    /// Gross channel probabilities of each observable.
    Gross,
    /// Joint probability matrix of two commuting observables.
    Joint,
    /// Conditional probabilities of one observable given another.
    Conditional,
    /// The state conditioned on one channel.
    Collapse,
    /// Luder's provisional operator for an observable.
    Luder,
    /// Branch decomposition over the channels of an observable.
    Branches,
    /// Anthropically weighted net probabilities of every observer.
    Net,
    /// Perception probability distribution over observer lifetimes.
    Lifetime,
    /// All validations plus correlation diagnostics.
    Check,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Validate,
        Command::Gross,
        Command::Joint,
        Command::Conditional,
        Command::Collapse,
        Command::Luder,
        Command::Branches,
        Command::Net,
        Command::Lifetime,
        Command::Check,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Gross => "gross",
            Command::Joint => "joint",
            Command::Conditional => "conditional",
            Command::Collapse => "collapse",
            Command::Luder => "luder",
            Command::Branches => "branches",
            Command::Net => "net",
            Command::Lifetime => "lifetime",
            Command::Check => "check",
        }
    }
}

/// Per-invocation settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Options {
    pub tol: f64,
    /// Tolerance of the adequate-correlation diagnosis.
    pub correlation_tol: f64,
    pub log_base: LogBase,
    pub observable: Option<String>,
    pub channel: Option<String>,
    pub rows: Option<String>,
    pub cols: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            correlation_tol: 0.01,
            log_base: LogBase::Two,
            observable: None,
            channel: None,
            rows: None,
            cols: None,
        }
    }
}

pub fn run(command: Command, scenario: &Scenario, opts: &Options) -> Result<Report> {
    let mut report = Report {
        command: command.name().into(),
        scenario: scenario.name().into(),
        tables: Vec::new(),
        notes: Vec::new(),
    };
    match command {
        Command::Validate => validate(scenario, opts, &mut report)?,
        Command::Gross => gross(scenario, opts, &mut report)?,
        Command::Joint => joint(scenario, opts, &mut report)?,
        Command::Conditional => conditional_cmd(scenario, opts, &mut report)?,
        Command::Collapse => collapse_cmd(scenario, opts, &mut report)?,
        Command::Luder => luder_cmd(scenario, opts, &mut report)?,
        Command::Branches => branches(scenario, opts, &mut report)?,
        Command::Net => net(scenario, opts, &mut report)?,
        Command::Lifetime => lifetime(scenario, &mut report)?,
        Command::Check => check(scenario, opts, &mut report)?,
    }
    Ok(report)
}

fn quantum_state<'s>(s: &'s Scenario, command: &str) -> Result<&'s ProbabilityOperator> {
    s.state.as_ref().ok_or_else(|| {
        CliError::Usage(format!(
            "`{command}` needs a quantum state; scenario `{}` declares none",
            s.name()
        ))
    })
}

fn first_observable<'s>(
    s: &'s Scenario,
    requested: Option<&str>,
    command: &str,
) -> Result<&'s ScenarioObservable> {
    match requested {
        Some(id) => s.observable(id),
        None => s.observables.first().ok_or_else(|| {
            CliError::Usage(format!(
                "`{command}` needs an observable; scenario `{}` declares none",
                s.name()
            ))
        }),
    }
}

fn probabilities(state: &ProbabilityOperator, obs: &ScenarioObservable) -> Result<Vec<f64>> {
    obs.global
        .channels()
        .iter()
        .map(|e| born(state, e).map_err(CliError::engine(format!("observable `{}`", obs.id))))
        .collect()
}

fn operator_table(caption: &str, labels: &[String], m: &CMatrix) -> RenderedTable {
    let real = m.iter().all(|z| z.im == 0.0);
    let mut t = RenderedTable::new(caption, "", labels.iter().cloned());
    for (i, label) in labels.iter().enumerate() {
        let cells = (0..m.ncols())
            .map(|j| {
                if real {
                    Cell::Number(m[(i, j)].re)
                } else {
                    Cell::Complex(m[(i, j)])
                }
            })
            .collect();
        t.push(label.clone(), cells);
    }
    t
}

fn classical_events<'m>(c: &'m ClassicalScenario) -> Vec<(&'m str, ClassicalEventuality<'m>)> {
    c.events
        .iter()
        .map(|(label, members)| {
            (
                label.as_str(),
                c.model.event(members).expect("events resolved at load"),
            )
        })
        .collect()
}

fn validate(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    if let Some(p) = &s.state {
        let mut t = RenderedTable::new(
            format!("state on {}", p.space()),
            "invariant",
            ["residual", "tol", "status"],
        );
        for (name, residual) in state_residuals(p, s.tol) {
            t.push(
                name,
                vec![
                    Cell::Number(residual),
                    Cell::Text(format!("{:e}", s.tol)),
                    Cell::Text(status(residual <= s.tol)),
                ],
            );
        }
        report.tables.push(t);
    }
    if !s.observables.is_empty() {
        let mut t = RenderedTable::new(
            "observables",
            "observable",
            [
                "space",
                "channels",
                "ranks",
                "orthogonality",
                "completeness",
                "status",
            ],
        );
        for o in &s.observables {
            let r = o.local.validate(s.tol);
            let ranks: Vec<String> = o.local.ranks().iter().map(|r| r.to_string()).collect();
            t.push(
                &o.id,
                vec![
                    Cell::Text(o.local.space().to_string()),
                    Cell::Number(o.local.len() as f64),
                    Cell::Text(ranks.join(" ")),
                    Cell::Number(r.orthogonality_residual),
                    Cell::Number(r.completeness_residual),
                    Cell::Text(status(r.passed())),
                ],
            );
        }
        report.tables.push(t);
    }
    if !s.observers.is_empty() {
        let mut t = RenderedTable::new(
            format!(
                "observers ({} weighting)",
                s.anthropic_scheme(opts.log_base).name()
            ),
            "observer",
            ["observable", "lifetime", "perception duration", "capacity"],
        );
        for o in &s.observers {
            let obs = &s.observables[o.observable];
            let ranks = obs.local.ranks();
            let capacity = if ranks.iter().all(|&r| r == ranks[0]) {
                Cell::Number(
                    entropy_capacity(obs.local.space().dim(), ranks[0], opts.log_base)
                        .map_err(CliError::engine(format!("observer `{}`", o.id)))?,
                )
            } else {
                Cell::Text("mixed rank".into())
            };
            t.push(
                &o.id,
                vec![
                    Cell::Text(obs.id.clone()),
                    Cell::Number(o.lifetime),
                    Cell::Number(o.perception_duration),
                    capacity,
                ],
            );
        }
        report.tables.push(t);
    }
    if let Some(c) = &s.classical {
        let total: f64 = c.model.measure().iter().sum();
        let mut t = RenderedTable::new("classical model", "invariant", ["residual", "status"]);
        t.push(
            "normalization",
            vec![Cell::Number((total - 1.0).abs()), Cell::Text(status(true))],
        );
        report.tables.push(t);
    }
    report.notes.push(format!(
        "scenario `{}` is valid at tol {:e}",
        s.name(),
        s.tol
    ));
    Ok(())
}

fn status(ok: bool) -> String {
    if ok { "ok" } else { "FAIL" }.into()
}

fn gross(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    if let Some(c) = &s.classical {
        let mut t = RenderedTable::new("event probabilities", "event", ["probability"]);
        for (label, e) in classical_events(c) {
            t.push(label, vec![Cell::Number(e.probability())]);
        }
        report.tables.push(t);
    }
    if s.classical.is_some() && s.state.is_none() {
        return Ok(());
    }
    let state = quantum_state(s, "gross")?;
    let selected: Vec<&ScenarioObservable> = match &opts.observable {
        Some(id) => vec![s.observable(id)?],
        None => s.observables.iter().collect(),
    };
    for o in selected {
        let probs = probabilities(state, o)?;
        let caption = format!("gross probabilities of `{}` on {}", o.id, o.local.space());
        let t = match &o.quantitative {
            Some(q) => {
                let mut t = RenderedTable::new(caption, "channel", ["value", "probability"]);
                for ((label, p), v) in o.local.labels().iter().zip(&probs).zip(q.values()) {
                    t.push(label, vec![Cell::Number(*v), Cell::Number(*p)]);
                }
                let expectation = q
                    .expectation(state)
                    .map_err(CliError::engine(format!("observable `{}`", o.id)))?;
                report.notes.push(format!(
                    "expectation of `{}`: {}",
                    o.id,
                    crate::render::decimal(expectation, 12)
                ));
                t
            }
            None => {
                let mut t = RenderedTable::new(caption, "channel", ["probability"]);
                for (label, p) in o.local.labels().iter().zip(&probs) {
                    t.push(label, vec![Cell::Number(*p)]);
                }
                t
            }
        };
        report.tables.push(t);
    }
    Ok(())
}

/// The (rows, cols) observable pair: explicit choices, or the first two
/// observables that live on different composite factors.
fn factor_pair<'s>(
    s: &'s Scenario,
    opts: &Options,
    command: &str,
) -> Result<(&'s ScenarioObservable, &'s ScenarioObservable)> {
    let factors = s.composite.as_ref().map_or(0, |c| c.space.factors().len());
    if factors < 2 {
        return Err(CliError::Usage(format!(
            "`{command}` needs a composite of at least two factors; scenario `{}` has none",
            s.name()
        )));
    }
    let on_factor: Vec<&ScenarioObservable> = s
        .observables
        .iter()
        .filter(|o| o.factor.is_some())
        .collect();
    let rows = match &opts.rows {
        Some(id) => s.observable(id)?,
        None => *on_factor.first().ok_or_else(|| {
            CliError::Usage(format!(
                "`{command}` needs observables on composite factors"
            ))
        })?,
    };
    let cols = match &opts.cols {
        Some(id) => s.observable(id)?,
        None => *on_factor
            .iter()
            .find(|o| o.factor != rows.factor)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "`{command}` needs a second observable on a different factor than `{}`",
                    rows.id
                ))
            })?,
    };
    if rows.id == cols.id {
        return Err(CliError::Usage(format!(
            "`{command}` needs two different observables"
        )));
    }
    Ok((rows, cols))
}

fn correlation_note(rows: &str, cols: &str, r: &CorrelationReport) -> String {
    let head = format!(
        "correlation check at tol {}",
        crate::render::decimal(r.tol, 12)
    );
    if !r.counts_match() {
        return format!(
            "{head}: `{rows}` does not adequately register `{cols}` ({} channels vs {})",
            r.row_channels, r.col_channels
        );
    }
    if !r.commuting {
        return format!("{head}: `{rows}` and `{cols}` do not commute");
    }
    let off = r.off_diagonal_mass.unwrap_or(f64::NAN);
    let dev = r.conditional_deviation.unwrap_or(f64::NAN);
    if r.adequately_correlated {
        format!(
            "{head}: `{rows}` adequately registers `{cols}` (off-diagonal mass {}, conditional deviation {})",
            crate::render::decimal(off, 12),
            crate::render::decimal(dev, 12)
        )
    } else {
        format!(
            "{head}: FAIL, `{rows}` does not adequately register `{cols}` (off-diagonal mass {}, conditional deviation {})",
            crate::render::decimal(off, 12),
            crate::render::decimal(dev, 12)
        )
    }
}

fn joint(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    if let (Some(c), None) = (&s.classical, &s.state) {
        let events = classical_events(c);
        let mut t = RenderedTable::new(
            "joint probabilities of event pairs",
            "event",
            events.iter().map(|(l, _)| l.to_string()),
        );
        for (label, a) in &events {
            let cells = events
                .iter()
                .map(|(_, b)| {
                    a.meet(b)
                        .map(|m| Cell::Number(m.probability()))
                        .map_err(CliError::engine("classical model"))
                })
                .collect::<Result<Vec<_>>>()?;
            t.push(*label, cells);
        }
        report.tables.push(t);
        return Ok(());
    }
    let state = quantum_state(s, "joint")?;
    let (rows, cols) = factor_pair(s, opts, "joint")?;
    let jm = joint_matrix(state, &rows.global, &cols.global, opts.tol).map_err(
        CliError::engine(format!("observables `{}` and `{}`", rows.id, cols.id)),
    )?;
    let mut columns: Vec<String> = cols.local.labels().to_vec();
    columns.push("total".into());
    let mut t = RenderedTable::new(
        format!(
            "joint probabilities (rows: `{}`, columns: `{}`)",
            rows.id, cols.id
        ),
        "",
        columns,
    );
    let row_marginals = jm.row_marginals();
    for (i, label) in rows.local.labels().iter().enumerate() {
        let mut cells: Vec<Cell> = (0..jm.entries.ncols())
            .map(|j| Cell::Number(jm.entries[(i, j)]))
            .collect();
        cells.push(Cell::Number(row_marginals[i]));
        t.push(label, cells);
    }
    let mut totals: Vec<Cell> = jm.col_marginals().into_iter().map(Cell::Number).collect();
    totals.push(Cell::Number(jm.total()));
    t.push("total", totals);
    report.tables.push(t);
    let r = correlation_check(state, &rows.global, &cols.global, opts.correlation_tol).map_err(
        CliError::engine(format!("observables `{}` and `{}`", rows.id, cols.id)),
    )?;
    report.notes.push(correlation_note(&rows.id, &cols.id, &r));
    Ok(())
}

fn conditional_cmd(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    if let (Some(c), None) = (&s.classical, &s.state) {
        let events = classical_events(c);
        let mut t = RenderedTable::new(
            "conditional probabilities P(column | row)",
            "given",
            events.iter().map(|(l, _)| l.to_string()),
        );
        for (label, a) in &events {
            let pa = a.probability();
            let cells = events
                .iter()
                .map(|(_, b)| {
                    let m = a.meet(b).map_err(CliError::engine("classical model"))?;
                    Ok(if pa > 0.0 {
                        Cell::Number(m.probability() / pa)
                    } else {
                        Cell::Text("undefined".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            t.push(*label, cells);
        }
        report.tables.push(t);
        return Ok(());
    }
    let state = quantum_state(s, "conditional")?;
    let given = first_observable(
        s,
        opts.rows.as_deref().or(opts.observable.as_deref()),
        "conditional",
    )?;
    let target = match &opts.cols {
        Some(id) => s.observable(id)?,
        None => s
            .observables
            .iter()
            .find(|o| o.id != given.id)
            .ok_or_else(|| {
                CliError::Usage("`conditional` needs a second observable as target".into())
            })?,
    };
    if target.id == given.id {
        return Err(CliError::Usage(
            "`conditional` needs two different observables".into(),
        ));
    }
    let mut columns: Vec<String> = target.local.labels().to_vec();
    columns.push("P(given)".into());
    let mut t = RenderedTable::new(
        format!(
            "conditional probabilities of `{}` given `{}`",
            target.id, given.id
        ),
        "given",
        columns,
    );
    let object = format!("observable `{}`", given.id);
    for (label, e) in given.local.labels().iter().zip(given.global.channels()) {
        if opts.channel.as_deref().is_some_and(|c| c != label) {
            continue;
        }
        let p = born(state, e).map_err(CliError::engine(&object))?;
        let mut cells: Vec<Cell> = if p <= ZERO_PROBABILITY_THRESHOLD && opts.channel.is_none() {
            report.notes.push(format!(
                "`{label}` has probability {p}; conditioning on it is undefined"
            ));
            vec![Cell::Text("undefined".into()); target.local.len()]
        } else {
            conditional(state, e, &target.global)
                .map_err(CliError::engine(format!("{object}, channel `{label}`")))?
                .into_iter()
                .map(Cell::Number)
                .collect()
        };
        cells.push(Cell::Number(p));
        t.push(label, cells);
    }
    if t.rows.is_empty() {
        return Err(CliError::Usage(format!(
            "observable `{}` has no channel `{}`",
            given.id,
            opts.channel.as_deref().unwrap_or_default()
        )));
    }
    report.tables.push(t);
    Ok(())
}

fn collapse_cmd(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    let state = quantum_state(s, "collapse")?;
    let obs = first_observable(s, opts.observable.as_deref(), "collapse")?;
    let object = format!("observable `{}`", obs.id);
    let index = match &opts.channel {
        Some(label) => obs.local.position(label).ok_or_else(|| {
            CliError::Usage(format!("observable `{}` has no channel `{label}`", obs.id))
        })?,
        None => {
            let probs = probabilities(state, obs)?;
            probs
                .iter()
                .position(|&p| p > ZERO_PROBABILITY_THRESHOLD)
                .expect("a valid state gives some channel positive probability")
        }
    };
    let label = &obs.local.labels()[index];
    let (post, p) = collapse(state, &obs.global.channels()[index])
        .map_err(CliError::engine(format!("{object}, channel `{label}`")))?;
    report.tables.push(operator_table(
        &format!(
            "probability operator conditioned on `{}` = `{label}`",
            obs.id
        ),
        &s.basis_labels(),
        post.matrix(),
    ));
    let mut t = RenderedTable::new(
        "gross probabilities after collapse",
        "channel",
        ["observable", "probability"],
    );
    for o in &s.observables {
        for (l, q) in o.local.labels().iter().zip(probabilities(&post, o)?) {
            t.push(l, vec![Cell::Text(o.id.clone()), Cell::Number(q)]);
        }
    }
    report.tables.push(t);
    report.notes.push(format!(
        "conditioned on `{}` = `{label}`, which had probability {}",
        obs.id,
        crate::render::decimal(p, 12)
    ));
    Ok(())
}

fn luder_cmd(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    let state = quantum_state(s, "luder")?;
    let obs = first_observable(s, opts.observable.as_deref(), "luder")?;
    let provisional =
        luder(state, &obs.global).map_err(CliError::engine(format!("observable `{}`", obs.id)))?;
    report.tables.push(operator_table(
        &format!("provisional operator for `{}`", obs.id),
        &s.basis_labels(),
        provisional.matrix(),
    ));
    let before = probabilities(state, obs)?;
    let after = probabilities(&provisional, obs)?;
    let mut t = RenderedTable::new(
        "channel probabilities",
        "channel",
        ["a priori", "provisional"],
    );
    let mut drift: f64 = 0.0;
    for ((label, a), b) in obs.local.labels().iter().zip(&before).zip(&after) {
        drift = drift.max((a - b).abs());
        t.push(label, vec![Cell::Number(*a), Cell::Number(*b)]);
    }
    report.tables.push(t);
    report.notes.push(format!(
        "largest change in a channel probability: {}",
        crate::render::decimal(drift, 12)
    ));
    Ok(())
}

fn branches(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    let state = quantum_state(s, "branches")?;
    let obs = first_observable(s, opts.observable.as_deref(), "branches")?;
    let object = format!("observable `{}`", obs.id);
    let input = match &s.pure {
        Some(ket) => State::Pure(ket.clone()),
        None => State::Mixed(state.clone()),
    };
    let d = branch_decompose(&input, &obs.global).map_err(CliError::engine(&object))?;
    let mut t = RenderedTable::new(
        format!("branches over `{}`", obs.id),
        "channel",
        ["probability", "purity"],
    );
    for (label, b) in obs.local.labels().iter().zip(&d.branches) {
        let purity = match &b.posterior {
            Some(p) => Cell::Number(p.matrix().iter().map(|z| z.norm_sqr()).sum()),
            None => Cell::Text("zero branch".into()),
        };
        t.push(label, vec![Cell::Number(b.probability), purity]);
    }
    report.tables.push(t);
    let provisional = luder(state, &obs.global).map_err(CliError::engine(&object))?;
    if let Some(recombined) = d.recombine() {
        report.notes.push(format!(
            "recombined branches differ from Luder's operator by {}",
            crate::render::decimal(recombined.distance(&provisional), 12)
        ));
    }
    Ok(())
}

fn net(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    let scheme = s.anthropic_scheme(opts.log_base);
    let mut long = RenderedTable::new(
        format!("net probabilities ({} weighting)", scheme.name()),
        "observer",
        ["channel", "gross", "weight", "net", "rate"],
    );
    if s.observers.is_empty() {
        report.tables.push(long);
        report
            .notes
            .push(format!("scenario `{}` declares no observers", s.name()));
        return Ok(());
    }
    let state = quantum_state(s, "net")?;
    let models = s.observer_models()?;
    let gross: Vec<Vec<f64>> = s
        .observers
        .iter()
        .map(|o| probabilities(state, &s.observables[o.observable]))
        .collect::<Result<_>>()?;
    let table = net_table(scheme, &models, &gross).map_err(CliError::engine("observers"))?;
    let w = &table.weighting;
    for (k, o) in s.observers.iter().enumerate() {
        let obs = &s.observables[o.observable];
        for (i, label) in obs.local.labels().iter().enumerate() {
            long.push(
                &o.id,
                vec![
                    Cell::Text(label.clone()),
                    Cell::Number(table.gross[k][i]),
                    Cell::Number(w.weights[k]),
                    Cell::Number(table.net[k][i]),
                    Cell::Number(w.rates[k]),
                ],
            );
        }
    }
    report.tables.push(long);

    let mut summary = match scheme {
        AnthropicScheme::Entropic { .. } => RenderedTable::new(
            "observer weights",
            "observer",
            ["channels", "capacity", "weight", "rate"],
        ),
        AnthropicScheme::Proper => RenderedTable::new(
            "observer weights",
            "observer",
            ["lifetime", "weight", "rate"],
        ),
        AnthropicScheme::Weak => {
            RenderedTable::new("observer weights", "observer", ["weight", "rate"])
        }
    };
    for (k, (o, m)) in s.observers.iter().zip(&models).enumerate() {
        let cells = match scheme {
            AnthropicScheme::Entropic { .. } => vec![
                Cell::Number(m.channel_count() as f64),
                Cell::Number(w.capacities.as_ref().expect("entropic weighting")[k]),
                Cell::Number(w.weights[k]),
                Cell::Number(w.rates[k]),
            ],
            AnthropicScheme::Proper => vec![
                Cell::Number(o.lifetime),
                Cell::Number(w.weights[k]),
                Cell::Number(w.rates[k]),
            ],
            AnthropicScheme::Weak => vec![Cell::Number(w.weights[k]), Cell::Number(w.rates[k])],
        };
        summary.push(&o.id, cells);
    }
    report.tables.push(summary);

    if let Some(t) = illustration(s, state, &table.gross, &table.net)? {
        report.tables.push(t);
    }
    if let Some(alpha) = w.alpha {
        report.notes.push(format!(
            "proportionality factor alpha = {}",
            crate::render::decimal(alpha, 12)
        ));
    }
    if let Some(mean) = w.mean_lifetime {
        report.notes.push(format!(
            "mean lifetime = {}",
            crate::render::decimal(mean, 12)
        ));
    }
    report.notes.push(format!(
        "net probabilities total {}",
        crate::render::decimal(table.total(), 12)
    ));
    Ok(())
}

/// Two observers on distinct factors: joint gross probabilities with
/// gross → net margins, rows for the observer on the earlier factor.
fn illustration(
    s: &Scenario,
    state: &ProbabilityOperator,
    gross: &[Vec<f64>],
    net: &[Vec<f64>],
) -> Result<Option<RenderedTable>> {
    let [a, b] = s.observers.as_slice() else {
        return Ok(None);
    };
    let (fa, fb) = (
        s.observables[a.observable].factor,
        s.observables[b.observable].factor,
    );
    let (Some(fa), Some(fb)) = (fa, fb) else {
        return Ok(None);
    };
    if fa == fb {
        return Ok(None);
    }
    let (r, c) = if fa < fb { (0, 1) } else { (1, 0) };
    let observers = [a, b];
    let (ro, co) = (observers[r], observers[c]);
    let (robs, cobs) = (&s.observables[ro.observable], &s.observables[co.observable]);
    let jm = match joint_matrix(state, &robs.global, &cobs.global, s.tol) {
        Ok(jm) => jm,
        Err(_) => return Ok(None),
    };
    let margin = format!("{}: gross → net", ro.id);
    let mut columns: Vec<String> = cobs.local.labels().to_vec();
    columns.push(margin);
    let mut t = RenderedTable::new(
        format!(
            "gross joint probabilities with gross → net margins (rows: `{}`, columns: `{}`)",
            ro.id, co.id
        ),
        "",
        columns,
    );
    for (i, label) in robs.local.labels().iter().enumerate() {
        let mut cells: Vec<Cell> = (0..jm.entries.ncols())
            .map(|j| Cell::Number(jm.entries[(i, j)]))
            .collect();
        cells.push(Cell::Transition {
            gross: gross[r][i],
            net: net[r][i],
        });
        t.push(label, cells);
    }
    let mut bottom: Vec<Cell> = (0..cobs.local.len())
        .map(|j| Cell::Transition {
            gross: gross[c][j],
            net: net[c][j],
        })
        .collect();
    bottom.push(Cell::Empty);
    t.push(format!("{}: gross → net", co.id), bottom);
    Ok(Some(t))
}

fn lifetime(s: &Scenario, report: &mut Report) -> Result<()> {
    for o in &s.observers {
        let Some(profile) = &o.profile else {
            continue;
        };
        let d = lifetime_distribution(profile)
            .map_err(CliError::engine(format!("observer `{}`", o.id)))?;
        let mut t = RenderedTable::new(
            format!("lifetime distribution of `{}`", o.id),
            "segment",
            [
                "duration",
                "capacity",
                "perception duration",
                "density",
                "mass",
                "cumulative",
            ],
        );
        for (k, seg) in profile.segments().iter().enumerate() {
            t.push(
                k.to_string(),
                vec![
                    Cell::Number(seg.duration),
                    Cell::Number(seg.capacity),
                    Cell::Number(seg.perception_duration),
                    Cell::Number(d.density[k]),
                    Cell::Number(d.masses[k]),
                    Cell::Number(d.cumulative[k]),
                ],
            );
        }
        report.tables.push(t);
        report.notes.push(format!(
            "`{}`: highest perception density in segment {}",
            o.id, d.argmax
        ));
    }
    if report.tables.is_empty() {
        return Err(CliError::Usage(format!(
            "`lifetime` needs an observer with a `profile`; scenario `{}` has none",
            s.name()
        )));
    }
    Ok(())
}

fn check(s: &Scenario, opts: &Options, report: &mut Report) -> Result<()> {
    validate(s, opts, report)?;
    report.notes.clear();
    if let Some(c) = &s.classical {
        let events = classical_events(c);
        let mut t = RenderedTable::new(
            "inclusion-exclusion residuals P(A or B) - P(A) - P(B) + P(A and B)",
            "event pair",
            ["residual"],
        );
        for (i, (la, a)) in events.iter().enumerate() {
            for (lb, b) in events.iter().skip(i + 1) {
                let join = a.join(b).map_err(CliError::engine("classical model"))?;
                let meet = a.meet(b).map_err(CliError::engine("classical model"))?;
                let r = join.probability() - a.probability() - b.probability() + meet.probability();
                t.push(format!("{la}, {lb}"), vec![Cell::Number(r)]);
            }
        }
        report.tables.push(t);
    }
    if let Some(state) = &s.state {
        let mut t = RenderedTable::new(
            format!(
                "correlation diagnostics at tol {}",
                crate::render::decimal(opts.correlation_tol, 12)
            ),
            "sensor / target",
            [
                "channels",
                "commuting",
                "off-diagonal mass",
                "conditional deviation",
                "verdict",
            ],
        );
        for (i, a) in s.observables.iter().enumerate() {
            for b in s.observables.iter().skip(i + 1) {
                let r =
                    correlation_check(state, &a.global, &b.global, opts.correlation_tol).map_err(
                        CliError::engine(format!("observables `{}` and `{}`", a.id, b.id)),
                    )?;
                let opt = |x: Option<f64>| x.map_or(Cell::Text("n/a".into()), Cell::Number);
                t.push(
                    format!("{} / {}", a.id, b.id),
                    vec![
                        Cell::Text(format!("{} vs {}", r.row_channels, r.col_channels)),
                        Cell::Text(if r.commuting { "yes" } else { "no" }.into()),
                        opt(r.off_diagonal_mass),
                        opt(r.conditional_deviation),
                        Cell::Text(
                            if r.adequately_correlated {
                                "adequate"
                            } else {
                                "inadequate"
                            }
                            .into(),
                        ),
                    ],
                );
            }
        }
        report.tables.push(t);
        let mut l = RenderedTable::new(
            "Luder channel preservation",
            "observable",
            ["largest drift"],
        );
        for o in &s.observables {
            let provisional = luder(state, &o.global)
                .map_err(CliError::engine(format!("observable `{}`", o.id)))?;
            let drift = probabilities(state, o)?
                .iter()
                .zip(probabilities(&provisional, o)?)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            l.push(&o.id, vec![Cell::Number(drift)]);
        }
        report.tables.push(l);
        if !s.observers.is_empty() {
            let mut sub = Report {
                command: String::new(),
                scenario: String::new(),
                tables: Vec::new(),
                notes: Vec::new(),
            };
            net(s, opts, &mut sub)?;
            report
                .notes
                .extend(sub.notes.into_iter().filter(|n| n.starts_with("net")));
        }
    }
    report
        .notes
        .push(format!("all validations pass at tol {:e}", s.tol));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{load_scenario, Source};

    fn preset(name: &str) -> Scenario {
        load_scenario(&Source::Preset(name.into()), 1e-10).unwrap()
    }

    fn number(t: &RenderedTable, row: &str, col: &str) -> f64 {
        match t.get(row, col) {
            Some(Cell::Number(x)) => *x,
            other => panic!("no number at ({row}, {col}): {other:?}"),
        }
    }

    #[test]
    fn stern_gerlach_gross_is_one_half_each() {
        let r = run(
            Command::Gross,
            &preset("stern-gerlach"),
            &Options::default(),
        )
        .unwrap();
        for t in &r.tables {
            for row in &t.rows {
                let Cell::Number(p) = row.cells[1] else {
                    panic!()
                };
                assert!((p - 0.5).abs() < 1e-12);
            }
        }
        assert!(r.notes.iter().all(|n| n.ends_with(": 0")), "{:?}", r.notes);
    }

    #[test]
    fn cat_box_joint_and_correlation_failure() {
        let r = run(Command::Joint, &preset("cat-box"), &Options::default()).unwrap();
        let t = &r.tables[0];
        let expected = [("reads awake", [0.45, 0.05]), ("reads asleep", [0.0, 0.5])];
        for (row, vals) in expected {
            assert!((number(t, row, "awake") - vals[0]).abs() < 1e-12);
            assert!((number(t, row, "asleep") - vals[1]).abs() < 1e-12);
        }
        assert!(r.notes[0].contains("FAIL"), "{}", r.notes[0]);
        assert!(
            r.notes[0].contains("off-diagonal mass 0.05"),
            "{}",
            r.notes[0]
        );
    }

    #[test]
    fn cat_box_conditional_given_detector() {
        let r = run(
            Command::Conditional,
            &preset("cat-box"),
            &Options::default(),
        )
        .unwrap();
        let t = &r.tables[0];
        assert!((number(t, "reads awake", "awake") - 0.9).abs() < 1e-12);
        assert!((number(t, "reads awake", "asleep") - 0.1).abs() < 1e-12);
        assert!((number(t, "reads asleep", "asleep") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_master_net_values_are_one_sixth() {
        let r = run(Command::Net, &preset("cat-master"), &Options::default()).unwrap();
        let long = &r.tables[0];
        assert_eq!(long.rows.len(), 6);
        for row in &long.rows {
            let Cell::Number(net) = row.cells[3] else {
                panic!()
            };
            assert!((net - 1.0 / 6.0).abs() < 1e-12);
        }
        let layout = &r.tables[2];
        assert_eq!(layout.rows.len(), 5);
        assert_eq!(layout.columns.len(), 3);
        assert_eq!(layout.cell_count(), 15);
    }

    #[test]
    fn net_without_observers_is_header_only() {
        let r = run(Command::Net, &preset("stern-gerlach"), &Options::default()).unwrap();
        assert_eq!(r.tables.len(), 1);
        assert!(r.tables[0].rows.is_empty());
    }

    #[test]
    fn joint_on_a_single_space_is_a_usage_error() {
        let err = run(
            Command::Joint,
            &preset("stern-gerlach"),
            &Options::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn cat_box_collapse_on_reading_awake() {
        let opts = Options {
            observable: Some("detector".into()),
            channel: Some("reads awake".into()),
            ..Options::default()
        };
        let r = run(Command::Collapse, &preset("cat-box"), &opts).unwrap();
        let t = &r.tables[0];
        let diag: Vec<f64> = (0..4)
            .map(|i| number(t, &t.rows[i].label.clone(), &t.columns[i].clone()))
            .collect();
        let expected = [0.9, 0.1, 0.0, 0.0];
        for (d, e) in diag.iter().zip(expected) {
            assert!((d - e).abs() < 1e-12);
        }
    }

    #[test]
    fn lifetime_masses_follow_capacity_ratio() {
        let r = run(
            Command::Lifetime,
            &preset("cat-master"),
            &Options::default(),
        )
        .unwrap();
        let cat = &r.tables[0];
        assert!((number(cat, "0", "mass") - 2.0 / 3.0).abs() < 1e-12);
        assert!((number(cat, "1", "mass") - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn classical_coin_commands() {
        let s = preset("coin");
        let r = run(Command::Gross, &s, &Options::default()).unwrap();
        assert_eq!(number(&r.tables[0], "heads", "probability"), 0.5);
        let c = run(Command::Check, &s, &Options::default()).unwrap();
        let ie = c
            .tables
            .iter()
            .find(|t| t.caption.starts_with("inclusion"))
            .unwrap();
        assert!(ie.rows.iter().all(|r| r.cells[0] == Cell::Number(0.0)));
        assert_eq!(
            run(Command::Luder, &s, &Options::default())
                .unwrap_err()
                .exit_code(),
            1
        );
    }
}
