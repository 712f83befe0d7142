//! Descriptor files shipped with the binary.

/// `(name, descriptor JSON)` for every bundled fixture.
pub const BUNDLED: &[(&str, &str)] = &[
    ("quadpol", include_str!("../fixtures/quadpol.json")),
    ("lifted2z", include_str!("../fixtures/lifted2z.json")),
    ("diag21", include_str!("../fixtures/diag21.json")),
    ("diag_expandable", include_str!("../fixtures/diag_expandable.json")),
    ("blaschke", include_str!("../fixtures/blaschke.json")),
];

/// Bundled descriptor by name, with or without the `.json` suffix.
pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == stem).map(|(_, s)| *s)
}
