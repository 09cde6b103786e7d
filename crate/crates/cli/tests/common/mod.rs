use std::path::PathBuf;
use std::process::Output;

/// Each malformed scenario, the exit code it must produce, and the phrase
/// naming the violated invariant in the error message.
pub const MALFORMED: &[(&str, i32, &str)] = &[
    ("non_unit_trace.json", 2, "unit trace"),
    ("non_hermitian.json", 2, "hermitian"),
    ("non_psd.json", 2, "positive semidefinite"),
    ("non_normalized_vector.json", 2, "unit norm"),
    ("non_orthogonal.json", 2, "orthogonality"),
    ("incomplete.json", 2, "completeness"),
    ("unknown_space.json", 1, "reference resolution"),
    ("unknown_observable.json", 1, "reference resolution"),
    ("wrong_vector_length.json", 1, "dimension"),
    ("syntax_error.json", 1, "parse error"),
    ("unknown_field.json", 1, "unknown field"),
    ("bad_composite.json", 1, "unknown space `c`"),
    ("classical_measure.json", 2, "measure sums to"),
    ("negative_lifetime.json", 2, "lifetime must be positive"),
    ("mixed_rank_entropic.json", 2, "mixed channel ranks"),
    ("bad_segment.json", 2, "duration must be positive"),
];

pub const PRESETS: [&str; 4] = ["coin", "stern-gerlach", "cat-box", "cat-master"];

pub const COMMANDS: [&str; 10] = [
    "validate",
    "gross",
    "joint",
    "conditional",
    "collapse",
    "luder",
    "branches",
    "net",
    "lifetime",
    "check",
];

pub fn malformed_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/malformed")
        .join(name)
}

pub fn eventuality(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_eventuality"))
        .args(args)
        .output()
        .expect("binary runs")
}
