//! Sample morphisms shared by the benchmarks.

use subshift::Morphism;

/// Named morphisms of increasing difficulty.
pub fn samples() -> Vec<(&'static str, Morphism)> {
    [
        ("fibonacci", "a -> ab\nb -> a"),
        ("thue-morse", "a -> ab\nb -> ba"),
        ("baab", "a -> baab\nb ->"),
        ("chacon", "0 -> 0010\n1 -> 1"),
        ("erasing", "a -> abccc\nb -> baccc\nc ->"),
        ("type-two", "e -> cbd\nc -> cc\nd -> dd\nb -> ba\na ->"),
    ]
    .into_iter()
    .map(|(name, text)| (name, Morphism::parse(text).expect("sample morphism parses")))
    .collect()
}
