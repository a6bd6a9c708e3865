use c4free::catalog::{self, CatalogId};
use c4free::coloring::{bound_for, color, color_core, BoundName, WeightedQuotient};
use c4free::graph::blowup;
use c4free::patterns::{classify, GraphClass};
use c4free::recognizer::{recognize_core, CoreKind};
use c4free::testkit::oracle::exact_chi;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDS: &[CatalogId] = &[
    CatalogId::Cycle(5),
    CatalogId::Cycle(7),
    CatalogId::Cycle(9),
    CatalogId::F0p(2),
    CatalogId::F2(1),
    CatalogId::F2(2),
    CatalogId::F2(6),
    CatalogId::F3,
    CatalogId::F4,
    CatalogId::F5,
    CatalogId::F7,
    CatalogId::F8,
    CatalogId::F9,
    CatalogId::F10,
    CatalogId::F11,
    CatalogId::F12,
];

fn class_for(id: CatalogId) -> GraphClass {
    if id.in_p7_catalog() { "p7-bull" } else { "fork-bull" }.parse().unwrap()
}

/// Colours the blowup through recognition, with the binding function the
/// labels allow.
fn run(id: CatalogId, w: &[usize]) -> (usize, usize, usize) {
    let h = catalog::build(id).unwrap().graph;
    let (g, _) = blowup(&h, w);
    let class = class_for(id);
    let core = recognize_core(&g, class).unwrap();
    assert!(matches!(core, CoreKind::Blowup { .. }), "{id} {w:?}");
    let omega = WeightedQuotient::new(h, w.to_vec()).omega();
    let labels = classify(&g);
    let (bound, value) = bound_for(class, omega, &labels);
    let c = color_core(&core, g.n(), bound, value).unwrap_or_else(|e| panic!("{id} {w:?}: {e}"));
    assert!(c.is_proper(&g), "{id} {w:?}");
    (c.k(), value, g.n())
}

#[test]
fn heavy_bags_within_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..300 {
        let id = IDS[rng.gen_range(0..IDS.len())];
        let top = rng.gen_range(1..=8);
        let w: Vec<usize> = (0..id.vertex_count()).map(|_| rng.gen_range(1..=top)).collect();
        let (used, bound, _) = run(id, &w);
        assert!(used <= bound, "{id} {w:?}: {used} > {bound}");
    }
}

#[test]
fn small_blowups_against_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 120 {
        let id = IDS[rng.gen_range(0..IDS.len())];
        let w: Vec<usize> = (0..id.vertex_count()).map(|_| rng.gen_range(1..=2)).collect();
        if w.iter().sum::<usize>() > 20 {
            continue;
        }
        let (used, bound, _) = run(id, &w);
        let h = catalog::build(id).unwrap().graph;
        let chi = exact_chi(&blowup(&h, &w).0).unwrap();
        assert!(chi <= used && used <= bound, "{id} {w:?}: χ {chi}, used {used}, bound {bound}");
        checked += 1;
    }
}

#[test]
fn extremal_blowups_are_tight() {
    // uniform blowups of the odd cycles reach each fractional bound
    let cases = [(5, 4, BoundName::FiveQuarters), (7, 4, BoundName::SevenSixths), (9, 4, BoundName::NineEighths)];
    for (m, k, name) in cases {
        let (used, bound, _) = run(CatalogId::Cycle(m), &vec![k; m]);
        assert_eq!(used, name.value(2 * k), "C{m}^{k}");
        assert!(used <= bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pipeline_is_proper_and_bounded(
        idx in 0..IDS.len(),
        seed in any::<u64>(),
        top in 1usize..=4,
    ) {
        let id = IDS[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<usize> = (0..id.vertex_count()).map(|_| rng.gen_range(1..=top)).collect();
        let h = catalog::build(id).unwrap().graph;
        let (g, _) = blowup(&h, &w);
        let out = color(&g, class_for(id)).unwrap();
        prop_assert!(out.coloring.is_proper(&g));
        prop_assert!(out.coloring.k() <= out.report.bound_value);
        prop_assert_eq!(out.report.omega, WeightedQuotient::new(h, w).omega());
    }
}
