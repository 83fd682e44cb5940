//! Send/receive matching: synchronization edges from the static
//! over-approximation of MPI point-to-point message delivery.
//!
//! A pair matches when every conjunct holds: same communicator, same
//! datatype, compatible count, tag equal or wildcarded, source equal to the
//! sender's section rank or wildcarded, and destination equal to the
//! receiver's section rank. A call in global context places no rank
//! constraint on its peer, so it matches conservatively.

use super::{CommDirection, CommRecord, EdgeCategory, EdgeRecord, RankContext};
use crate::frontend::{RecvSource, RecvTag};

#[derive(Debug, Clone, Copy, Default)]
pub struct MatchOptions {
    /// Require `recv.count == send.count` instead of `recv.count >= send.count`.
    pub strict_count: bool,
}

/// An orphan communication call that matched nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchWarning {
    UnmatchedSend { block: u32, stmt: u32 },
    UnmatchedRecv { block: u32, stmt: u32 },
}

impl std::fmt::Display for MatchWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatchWarning::UnmatchedSend { block, stmt } => {
                write!(f, "unmatched send at statement {stmt} (block {block})")
            }
            MatchWarning::UnmatchedRecv { block, stmt } => {
                write!(f, "unmatched receive at statement {stmt} (block {block})")
            }
        }
    }
}

fn pair_matches(send: &CommRecord, recv: &CommRecord, opts: &MatchOptions) -> bool {
    if send.communicator != recv.communicator || send.datatype != recv.datatype {
        return false;
    }
    let count_ok = if opts.strict_count {
        recv.count == send.count
    } else {
        recv.count >= send.count
    };
    if !count_ok {
        return false;
    }
    let tag_ok = match (recv.tag, send.tag) {
        (RecvTag::AnyTag, _) => true,
        (RecvTag::Tag(r), RecvTag::Tag(s)) => r == s,
        (RecvTag::Tag(_), RecvTag::AnyTag) => false, // sends always carry literals
    };
    if !tag_ok {
        return false;
    }
    let source_ok = match (recv.peer, send.section) {
        (RecvSource::AnySource, _) => true,
        (RecvSource::Rank(_), RankContext::Global) => true,
        (RecvSource::Rank(want), RankContext::Section(r)) => want == r,
    };
    if !source_ok {
        return false;
    }
    match (send.peer, recv.section) {
        (_, RankContext::Global) => true,
        (RecvSource::Rank(dest), RankContext::Section(r)) => dest == r,
        (RecvSource::AnySource, _) => false, // sends always carry literal dests
    }
}

/// Emits one synchronization edge per feasible send/receive pairing, plus
/// warnings for calls that matched nothing.
pub fn match_sends_recvs(
    comms: &[CommRecord],
    opts: &MatchOptions,
) -> (Vec<EdgeRecord>, Vec<MatchWarning>) {
    let sends: Vec<&CommRecord> = comms
        .iter()
        .filter(|c| c.direction == CommDirection::Send)
        .collect();
    let recvs: Vec<&CommRecord> = comms
        .iter()
        .filter(|c| c.direction == CommDirection::Receive)
        .collect();

    let mut edges = Vec::new();
    let mut send_matched = vec![false; sends.len()];
    let mut recv_matched = vec![false; recvs.len()];
    for (si, send) in sends.iter().enumerate() {
        for (ri, recv) in recvs.iter().enumerate() {
            if pair_matches(send, recv, opts) {
                send_matched[si] = true;
                recv_matched[ri] = true;
                edges.push(EdgeRecord {
                    from: send.block,
                    to: recv.block,
                    category: EdgeCategory::Synchronization,
                    branch: None,
                });
            }
        }
    }

    let mut warnings = Vec::new();
    for (si, send) in sends.iter().enumerate() {
        if !send_matched[si] {
            warnings.push(MatchWarning::UnmatchedSend {
                block: send.block,
                stmt: send.stmt,
            });
        }
    }
    for (ri, recv) in recvs.iter().enumerate() {
        if !recv_matched[ri] {
            warnings.push(MatchWarning::UnmatchedRecv {
                block: recv.block,
                stmt: recv.stmt,
            });
        }
    }
    (edges, warnings)
}
