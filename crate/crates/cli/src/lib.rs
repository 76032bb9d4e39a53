//! Command implementations and the HTTP service behind the `hedonic` binary.
//!
//! Both front ends render results through [`hedonic_core::wire`], so the JSON printed by
//! `hedonic check --format json` is byte-identical to the body of `POST /api/certify`.

pub mod commands;
pub mod server;

/// Largest game accepted for blocking-coalition search (2^20 candidate coalitions).
pub const STABILITY_CAP: usize = 20;

/// Fixture documents shipped with the repository, by name.
pub const FIXTURES: [(&str, &str); 3] = [
    ("story", include_str!("../../../fixtures/story.game")),
    (
        "complete4",
        include_str!("../../../fixtures/complete4.game"),
    ),
    ("empty5", include_str!("../../../fixtures/empty5.game")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
