//! Recipes shipped with the crate for the reference figures.
//!
//! The `.mbl` sources live in `figures/`; `manifest.txt` fixes their order.

pub const MANIFEST: &str = include_str!("../figures/manifest.txt");

const SOURCES: &[(&str, &str)] = &[
    ("irrot-0", include_str!("../figures/irrot-0.mbl")),
    ("irrot-1", include_str!("../figures/irrot-1.mbl")),
    ("irrot-2", include_str!("../figures/irrot-2.mbl")),
    ("irrot-3", include_str!("../figures/irrot-3.mbl")),
    ("vortexline", include_str!("../figures/vortexline.mbl")),
    ("yinyang", include_str!("../figures/yinyang.mbl")),
    ("curl2", include_str!("../figures/curl2.mbl")),
    ("curlamboseen", include_str!("../figures/curlamboseen.mbl")),
    ("curlamboseen5", include_str!("../figures/curlamboseen5.mbl")),
];

/// Figure names in manifest order.
pub fn names() -> impl Iterator<Item = &'static str> {
    MANIFEST.lines().map(str::trim).filter(|l| !l.is_empty())
}

/// Recipe text of a shipped figure.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
