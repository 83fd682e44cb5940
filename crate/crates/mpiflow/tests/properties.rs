//! Property tests over randomly generated programs: the iterative fixpoint
//! must agree with the independent path-enumeration oracle, rank scoping
//! must isolate sections, and the whole pipeline must stay deterministic.

use mpiflow::cfg::{build, BlockKind, EdgeCategory, MatchOptions, RankContext};
use mpiflow::dataflow::{self, oracle_reach};
use mpiflow::frontend::parse;
use mpiflow::report::{analyze_source, render_json, ReportOptions};
use mpiflow::testgen::random_program;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn programs(seed: u64, count: usize) -> impl Iterator<Item = String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| random_program(&mut rng))
}

#[test]
fn fixpoint_agrees_with_oracle() {
    for src in programs(0xF1A7, 300) {
        let p = parse(&src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();
        let df = dataflow::run(&p, &cfg);
        let gk = dataflow::GenKill {
            gen: df.gen.clone(),
            kill: df.kill.clone(),
        };
        let oracle = oracle_reach(&cfg, &df.defs, &gk).unwrap();
        for b in &cfg.blocks {
            assert_eq!(
                df.reach[b.id as usize], oracle[b.id as usize],
                "reach(block {}) disagrees with oracle for:\n{src}",
                b.id
            );
        }
    }
}

#[test]
fn rank_sections_are_isolated() {
    for src in programs(0x5C0F, 300) {
        let p = parse(&src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();
        let df = dataflow::run(&p, &cfg);
        for b in &cfg.blocks {
            if let RankContext::Section(r) = b.rank_context {
                for &k in df.reach[b.id as usize]
                    .iter()
                    .chain(&df.avail[b.id as usize])
                {
                    match df.defs[k].context {
                        RankContext::Global => {}
                        RankContext::Section(dr) => assert_eq!(
                            dr, r,
                            "section-{dr} def {}@{} leaked into section-{r} block {} of:\n{src}",
                            df.defs[k].var, df.defs[k].stmt, b.id
                        ),
                    }
                }
            }
        }
    }
}

#[test]
fn sweep_count_stays_within_bound() {
    for src in programs(0x5EEB, 300) {
        let p = parse(&src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();
        let df = dataflow::run(&p, &cfg);
        assert!(
            df.sweeps <= cfg.blocks.len() * df.defs.len() + 1,
            "{} sweeps for {} blocks x {} defs:\n{src}",
            df.sweeps,
            cfg.blocks.len(),
            df.defs.len()
        );
    }
}

#[test]
fn blocks_partition_the_statements() {
    for src in programs(0xB10C, 300) {
        let p = parse(&src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();

        let mut covered: Vec<u32> = cfg.blocks.iter().flat_map(|b| b.stmts.clone()).collect();
        let mut expected: Vec<u32> = p.executable().filter_map(|s| s.number).collect();
        covered.sort_unstable();
        expected.sort_unstable();
        assert_eq!(covered, expected, "block partition broken for:\n{src}");

        for (i, b) in cfg.blocks.iter().enumerate() {
            assert_eq!(b.id as usize, i + 1, "non-consecutive block ids:\n{src}");
            assert!(b.stmts.windows(2).all(|w| w[0] < w[1]));
        }

        for e in &cfg.edges {
            let n = cfg.blocks.len() as u32;
            assert!(e.from >= 1 && e.from <= n && e.to >= 1 && e.to <= n);
            if e.category == EdgeCategory::Synchronization {
                assert_eq!(cfg.block(e.from).kind, BlockKind::Send);
                assert_eq!(cfg.block(e.to).kind, BlockKind::Receive);
            }
        }
    }
}

#[test]
fn analysis_is_deterministic() {
    for src in programs(0xDE7E, 100) {
        let a = analyze_source(&src, &ReportOptions::default()).unwrap();
        let b = analyze_source(&src, &ReportOptions::default()).unwrap();
        assert_eq!(
            render_json(&a.report),
            render_json(&b.report),
            "for:\n{src}"
        );
    }
}

#[test]
fn strict_matching_only_removes_sync_edges() {
    for src in programs(0x57C7, 300) {
        let p = parse(&src).unwrap();
        let loose = build(
            &p,
            &MatchOptions {
                strict_count: false,
            },
        )
        .unwrap();
        let strict = build(&p, &MatchOptions { strict_count: true }).unwrap();
        let loose_sync: Vec<_> = loose.sync_edges().collect();
        for e in strict.sync_edges() {
            assert!(
                loose_sync.iter().any(|l| l.from == e.from && l.to == e.to),
                "strict matching invented edge {}->{} in:\n{src}",
                e.from,
                e.to
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parser_never_panics(src in "[ -~\n]{0,200}") {
        let _ = parse(&src);
    }

    #[test]
    fn analysis_never_panics_on_accepted_input(src in "[ -~\n]{0,200}") {
        if let Ok(p) = parse(&src) {
            if let Ok(cfg) = build(&p, &MatchOptions::default()) {
                let _ = dataflow::run(&p, &cfg);
            }
        }
    }
}
