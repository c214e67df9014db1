//! Atomic arbitrage detection: closed swap cycles within one transaction.

use serde::{Deserialize, Serialize};

use crate::decode::SwapEvent;
use crate::primitives::{Address, B256, RawAmount, SignedAmount};

/// A closed cycle of swaps inside one transaction. The cycle starts and ends
/// in `profit_token`; profit may be negative (failed optimistic attempts stay
/// in the data, pricing decides their value).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arbitrage {
    pub tx_hash: B256,
    pub block_number: u64,
    pub path: Vec<SwapEvent>,
    pub profit_token: Address,
    pub start_amount: RawAmount,
    pub end_amount: RawAmount,
    pub profit_raw: SignedAmount,
}

impl Arbitrage {
    fn from_path(path: Vec<SwapEvent>) -> Arbitrage {
        let first = path.first().expect("cycle has at least two swaps");
        let last = path.last().expect("cycle has at least two swaps");
        let start_amount = first.amount_in.clone();
        let end_amount = last.amount_out.clone();
        Arbitrage {
            tx_hash: first.tx_hash,
            block_number: first.block_number,
            profit_token: first.token_in,
            profit_raw: SignedAmount::difference(&end_amount, &start_amount),
            start_amount,
            end_amount,
            path,
        }
    }
}

/// Chains longer than this are not searched for; no real atomic arbitrage
/// comes close, and the bound keeps adversarial transactions cheap.
const MAX_CYCLE_LEN: usize = 16;

/// Extracts a maximal set of disjoint closed cycles from one transaction's
/// swaps (ordered by log index).
///
/// Greedy rule, deterministic: repeatedly take the earliest unused swap and
/// claim the longest chain of unused later swaps that links
/// `token_out → token_in` and closes back to the start token across at least
/// two distinct pools; ties between equally long chains go to the
/// lexicographically smallest log-index sequence.
pub fn detect_arbitrages(tx_swaps: &[SwapEvent]) -> Vec<Arbitrage> {
    debug_assert!(
        tx_swaps.windows(2).all(|w| w[0].log_index < w[1].log_index),
        "swaps must be ordered by log index"
    );
    let mut used = vec![false; tx_swaps.len()];
    let mut findings = Vec::new();

    for start in 0..tx_swaps.len() {
        if used[start] {
            continue;
        }
        // Any cycle over currently unused swaps that contains `start` must
        // begin there (log indices increase along a path), so a miss here
        // rules this swap out for good.
        if let Some(indices) = longest_cycle_from(tx_swaps, &used, start) {
            for &i in &indices {
                used[i] = true;
            }
            let path: Vec<SwapEvent> = indices.iter().map(|&i| tx_swaps[i].clone()).collect();
            findings.push(Arbitrage::from_path(path));
        }
    }
    findings
}

fn longest_cycle_from(swaps: &[SwapEvent], used: &[bool], start: usize) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    let mut path = vec![start];
    extend(swaps, used, start, &mut path, &mut best);
    best
}

fn extend(
    swaps: &[SwapEvent],
    used: &[bool],
    start: usize,
    path: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    let tail = *path.last().expect("path never empty");

    // A closing chain: back at the start token, spanning >= 2 swaps over
    // >= 2 distinct pools.
    if path.len() >= 2 && swaps[tail].token_out == swaps[start].token_in {
        let first_pool = swaps[path[0]].pool;
        if path.iter().any(|&i| swaps[i].pool != first_pool) {
            let better = match best {
                None => true,
                // Candidates are explored in ascending index order, so among
                // equal lengths the first one found is already lex-smallest.
                Some(current) => path.len() > current.len(),
            };
            if better {
                *best = Some(path.clone());
            }
        }
    }
    if path.len() >= MAX_CYCLE_LEN {
        return;
    }
    for next in (tail + 1)..swaps.len() {
        if used[next] || path.contains(&next) {
            continue;
        }
        if swaps[next].token_in != swaps[tail].token_out {
            continue;
        }
        path.push(next);
        extend(swaps, used, start, path, best);
        path.pop();
    }
}
