//! dcu/dpu pair construction from the reach/avail sets.

use super::{DefSet, DefUses};

/// A def with a c-use it can affect. Indices into `DefUses::defs`/`cuses`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DcuPair {
    pub def: usize,
    pub cuse: usize,
}

/// A def with a p-use it can affect. Indices into `DefUses::defs`/`puses`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpuPair {
    pub def: usize,
    pub puse: usize,
}

/// `dcu(i) = reach(i) ∩ c-use(i)`, refined intra-block: a use preceded by a
/// local definition of the same variable pairs with the latest such
/// definition only.
pub fn compute_dcu(uses: &DefUses, reach: &[DefSet]) -> Vec<DcuPair> {
    let mut pairs = Vec::new();
    for (ui, cuse) in uses.cuses.iter().enumerate() {
        let local_latest = uses
            .defs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.var == cuse.var && d.block == cuse.block && d.stmt < cuse.stmt)
            .max_by_key(|(_, d)| d.stmt)
            .map(|(k, _)| k);
        if let Some(def) = local_latest {
            pairs.push(DcuPair { def, cuse: ui });
        } else {
            for &def in &reach[cuse.block as usize] {
                if uses.defs[def].var == cuse.var {
                    pairs.push(DcuPair { def, cuse: ui });
                }
            }
        }
    }
    pairs.sort_by(|a, b| sort_key_dcu(uses, a).cmp(&sort_key_dcu(uses, b)));
    pairs
}

fn sort_key_dcu<'a>(uses: &'a DefUses, p: &DcuPair) -> (&'a str, u32, u32) {
    (
        uses.defs[p.def].var.as_str(),
        uses.defs[p.def].stmt,
        uses.cuses[p.cuse].stmt,
    )
}

/// `dpu(i, j) = avail(i) ∩ p-use(i, j)`.
pub fn compute_dpu(uses: &DefUses, avail: &[DefSet]) -> Vec<DpuPair> {
    let mut pairs = Vec::new();
    for (ui, puse) in uses.puses.iter().enumerate() {
        for &def in &avail[puse.from as usize] {
            if uses.defs[def].var == puse.var {
                pairs.push(DpuPair { def, puse: ui });
            }
        }
    }
    pairs.sort_by(|a, b| sort_key_dpu(uses, a).cmp(&sort_key_dpu(uses, b)));
    pairs
}

fn sort_key_dpu<'a>(uses: &'a DefUses, p: &DpuPair) -> (&'a str, u32, u32, u32) {
    (
        uses.defs[p.def].var.as_str(),
        uses.defs[p.def].stmt,
        uses.puses[p.puse].from,
        uses.puses[p.puse].to,
    )
}
