//! gen/kill extraction and the iterative reach/avail fixpoint.

use super::{DefSet, Definition};
use crate::cfg::{MpiCfg, RankContext};

#[derive(Debug, Clone)]
pub struct GenKill {
    /// Indexed by block id; index 0 unused.
    pub gen: Vec<DefSet>,
    pub kill: Vec<DefSet>,
}

#[derive(Debug, Clone)]
pub struct ReachAvail {
    pub reach: Vec<DefSet>,
    pub avail: Vec<DefSet>,
    pub sweeps: usize,
}

/// `gen(i)`: downward-exposed definitions of block i (not overwritten later
/// in the block). `kill(i)`: every definition anywhere of a variable the
/// block defines, minus `gen(i)`.
pub fn compute_gen_kill(cfg: &MpiCfg, defs: &[Definition]) -> GenKill {
    let n = cfg.blocks.len() + 1;
    let mut gen = vec![DefSet::new(); n];
    let mut kill = vec![DefSet::new(); n];

    for block in &cfg.blocks {
        let i = block.id as usize;
        let local: Vec<usize> = defs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.block == block.id)
            .map(|(k, _)| k)
            .collect();
        for &k in &local {
            let overwritten = local
                .iter()
                .any(|&m| defs[m].var == defs[k].var && defs[m].stmt > defs[k].stmt);
            if !overwritten {
                gen[i].insert(k);
            }
        }
        for (m, d) in defs.iter().enumerate() {
            if local.iter().any(|&k| defs[k].var == d.var) && !gen[i].contains(&m) {
                kill[i].insert(m);
            }
        }
    }
    GenKill { gen, kill }
}

/// May a definition with context `def_ctx` enter a block with context
/// `block_ctx`? Section-local definitions cannot cross into a section of a
/// different rank.
pub fn scope_admits(def_ctx: RankContext, block_ctx: RankContext) -> bool {
    match (def_ctx, block_ctx) {
        (RankContext::Section(r), RankContext::Section(r2)) => r == r2,
        _ => true,
    }
}

/// Iterative fixpoint over sequential and parallel edges:
/// `reach(i) = U_p scope_filter(avail(p))`,
/// `avail(p) = gen(p) U (reach(p) - kill(p))`.
pub fn compute_reach_avail(cfg: &MpiCfg, defs: &[Definition], gk: &GenKill) -> ReachAvail {
    let n = cfg.blocks.len() + 1;
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in cfg.flow_edges() {
        if !preds[e.to as usize].contains(&e.from) {
            preds[e.to as usize].push(e.from);
        }
    }

    let mut reach = vec![DefSet::new(); n];
    let mut avail = vec![DefSet::new(); n];
    let mut sweeps = 0usize;
    loop {
        sweeps += 1;
        let mut changed = false;
        for block in &cfg.blocks {
            let i = block.id as usize;
            let mut new_reach = DefSet::new();
            for &p in &preds[i] {
                for &d in &avail[p as usize] {
                    if scope_admits(defs[d].context, block.rank_context) {
                        new_reach.insert(d);
                    }
                }
            }
            let mut new_avail = gk.gen[i].clone();
            new_avail.extend(new_reach.difference(&gk.kill[i]));
            if new_reach != reach[i] || new_avail != avail[i] {
                changed = true;
                reach[i] = new_reach;
                avail[i] = new_avail;
            }
        }
        if !changed {
            break;
        }
        // Finite lattice and monotone transfer guarantee termination.
        assert!(
            sweeps <= cfg.blocks.len() * defs.len() + 1,
            "fixpoint exceeded sweep bound"
        );
    }
    ReachAvail {
        reach,
        avail,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::super::collect_defs_uses;
    use super::*;
    use crate::cfg::{build, MatchOptions};
    use crate::frontend::parse;

    const CANONICAL: &str = include_str!("../../../../samples/sum.f");

    struct Fixture {
        defs: Vec<Definition>,
        gk: GenKill,
        ra: ReachAvail,
    }

    fn fixture(src: &str) -> Fixture {
        let p = parse(src).unwrap();
        let cfg = build(&p, &MatchOptions::default()).unwrap();
        let uses = collect_defs_uses(&p, &cfg);
        let gk = compute_gen_kill(&cfg, &uses.defs);
        let ra = compute_reach_avail(&cfg, &uses.defs, &gk);
        Fixture {
            defs: uses.defs,
            gk,
            ra,
        }
    }

    fn idx(f: &Fixture, var: &str, stmt: u32) -> usize {
        f.defs
            .iter()
            .position(|d| d.var == var && d.stmt == stmt)
            .unwrap_or_else(|| panic!("no def {var}@{stmt}"))
    }

    #[test]
    fn canonical_gen_kill_block5() {
        let f = fixture(CANONICAL);
        let sum4 = idx(&f, "SUM", 4);
        let sum11 = idx(&f, "SUM", 11);
        assert!(f.gk.gen[5].contains(&sum11));
        assert!(!f.gk.gen[5].contains(&sum4));
        assert!(f.gk.kill[5].contains(&sum4));
    }

    #[test]
    fn block_defining_twice_gens_only_later() {
        let f = fixture(CANONICAL);
        // block 17 holds X@26 then X@27
        let x26 = idx(&f, "X", 26);
        let x27 = idx(&f, "X", 27);
        assert!(f.gk.gen[17].contains(&x27));
        assert!(!f.gk.gen[17].contains(&x26));
        assert!(f.gk.kill[17].contains(&x26));
    }

    #[test]
    fn global_def_flows_into_section() {
        let f = fixture(CANONICAL);
        let sum4 = idx(&f, "SUM", 4);
        assert!(f.ra.reach[5].contains(&sum4));
    }

    #[test]
    fn section_local_defs_reach_their_own_section() {
        let f = fixture(CANONICAL);
        let x15 = idx(&f, "X", 15);
        assert!(f.ra.reach[9].contains(&x15));
        assert!(f.ra.reach[10].contains(&x15));
    }

    #[test]
    fn cross_section_defs_are_filtered() {
        let f = fixture(CANONICAL);
        let x17 = idx(&f, "X", 17);
        let x19 = idx(&f, "X", 19);
        // no Section(1) definition of X reaches the Section(2) body
        assert!(!f.ra.reach[17].contains(&x17));
        assert!(!f.ra.reach[17].contains(&x19));
        assert!(!f.ra.avail[17].contains(&x17));
    }

    #[test]
    fn section_def_flows_into_following_global_code() {
        let f = fixture(CANONICAL);
        let x17 = idx(&f, "X", 17);
        // the rank-1 value of X really is carried into the join and onward
        assert!(f.ra.reach[15].contains(&x17));
        assert!(f.ra.reach[22].contains(&x17));
    }

    #[test]
    fn myid_available_at_rank_forks() {
        let f = fixture(CANONICAL);
        let myid = idx(&f, "MYID", 7);
        assert!(f.ra.avail[2].contains(&myid));
        assert!(f.ra.avail[7].contains(&myid));
        assert!(f.ra.avail[16].contains(&myid));
    }

    #[test]
    fn entry_reach_is_empty() {
        let f = fixture(CANONICAL);
        assert!(f.ra.reach[1].is_empty());
    }

    #[test]
    fn two_block_chain() {
        let f = fixture("X=1\ncall MPI_Init(ierr)\ncall MPI_Finalize(ierr)\nEND\n");
        let x1 = idx(&f, "X", 1);
        assert!(f.ra.reach[2].contains(&x1));
    }

    #[test]
    fn gen_subset_of_avail() {
        let f = fixture(CANONICAL);
        for i in 1..f.ra.avail.len() {
            assert!(f.gk.gen[i].is_subset(&f.ra.avail[i]));
        }
    }
}
