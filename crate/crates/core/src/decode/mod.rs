//! Log classification: recognize registered swap/liquidation topics in a
//! block's logs and decode them into typed events.

mod liquidation;
mod swap;

pub use liquidation::decode_liquidation;
pub use swap::{decode_v2_swap, decode_v3_swap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::block::{BlockData, TxStatus};
use crate::pool::{MetadataSource, PoolFamily, StateError};
use crate::primitives::{Address, B256, RawAmount};
use crate::registry::{EventKind, EventRegistry};

/// A decoded AMM swap, oriented as token flow through the pool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapEvent {
    pub tx_hash: B256,
    pub block_number: u64,
    pub log_index: u32,
    pub pool: Address,
    pub token_in: Address,
    pub token_out: Address,
    pub amount_in: RawAmount,
    pub amount_out: RawAmount,
    /// Sender of the enclosing transaction.
    pub initiator: Address,
    /// Recipient named by the event itself.
    pub recipient: Address,
}

/// A decoded lending-protocol liquidation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiquidationEvent {
    pub tx_hash: B256,
    pub block_number: u64,
    pub log_index: u32,
    pub protocol: String,
    pub liquidator: Address,
    pub borrower: Address,
    pub debt_token: Address,
    pub debt_repaid: RawAmount,
    pub collateral_token: Address,
    pub collateral_seized: RawAmount,
}

/// Transaction-level context threaded into log decoding.
#[derive(Debug, Clone, Copy)]
pub struct TxContext {
    pub block_number: u64,
    pub tx_hash: B256,
    pub initiator: Address,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("log has {got} topics, expected {expected}")]
    TopicCount { expected: usize, got: usize },
    #[error("log data holds {got} words, expected at least {expected}")]
    TruncatedData { expected: usize, got: usize },
    /// Data decoded but does not describe a single-direction swap.
    #[error("malformed swap: {0}")]
    MalformedSwap(&'static str),
    #[error("event violates invariant: {0}")]
    InvariantViolation(&'static str),
}

/// Events of one transaction, in log order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxEvents {
    pub tx_hash: B256,
    pub index: u32,
    pub initiator: Address,
    pub swaps: Vec<SwapEvent>,
    pub liquidations: Vec<LiquidationEvent>,
}

impl TxEvents {
    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty() && self.liquidations.is_empty()
    }
}

/// Per-block decode accounting. Every log lands in exactly one bucket:
/// decoded, ignored (unregistered topic), malformed, or unresolved pool.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeDiagnostics {
    pub decoded_swaps: u64,
    pub decoded_liquidations: u64,
    pub ignored_logs: u64,
    pub malformed_logs: u64,
    pub unresolved_pool_logs: u64,
    pub reverted_txs: u64,
}

impl DecodeDiagnostics {
    pub fn classified_logs(&self) -> u64 {
        self.decoded_swaps
            + self.decoded_liquidations
            + self.ignored_logs
            + self.malformed_logs
            + self.unresolved_pool_logs
    }

    pub fn merge(&mut self, other: &DecodeDiagnostics) {
        self.decoded_swaps += other.decoded_swaps;
        self.decoded_liquidations += other.decoded_liquidations;
        self.ignored_logs += other.ignored_logs;
        self.malformed_logs += other.malformed_logs;
        self.unresolved_pool_logs += other.unresolved_pool_logs;
        self.reverted_txs += other.reverted_txs;
    }
}

/// A block after classification: per-transaction event groups in
/// transaction order, plus decode diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedBlock {
    pub block_number: u64,
    pub timestamp: u64,
    pub transactions: Vec<TxEvents>,
    pub diagnostics: DecodeDiagnostics,
}

impl ClassifiedBlock {
    pub fn swap_count(&self) -> usize {
        self.transactions.iter().map(|t| t.swaps.len()).sum()
    }

    pub fn liquidation_count(&self) -> usize {
        self.transactions.iter().map(|t| t.liquidations.len()).sum()
    }
}

/// Classifies every log of a block against the registry.
///
/// Unregistered topics are ignored; registered logs either decode or are
/// counted as malformed; swaps on pools whose metadata cannot be resolved are
/// skipped and counted. Transport-level state failures abort the block so the
/// caller can retry.
pub fn classify_block(
    block: &BlockData,
    registry: &EventRegistry,
    metadata: &dyn MetadataSource,
) -> Result<ClassifiedBlock, StateError> {
    let mut diagnostics = DecodeDiagnostics::default();
    let mut transactions = Vec::with_capacity(block.transactions.len());

    for tx in &block.transactions {
        if tx.status == TxStatus::Reverted {
            diagnostics.reverted_txs += 1;
        }
        let ctx = TxContext {
            block_number: block.number,
            tx_hash: tx.hash,
            initiator: tx.sender,
        };
        let mut events = TxEvents {
            tx_hash: tx.hash,
            index: tx.index,
            initiator: tx.sender,
            swaps: Vec::new(),
            liquidations: Vec::new(),
        };

        for log in &tx.logs {
            let Some(topic0) = log.topics.first() else {
                diagnostics.ignored_logs += 1;
                continue;
            };
            let Some(entry) = registry.lookup(topic0) else {
                diagnostics.ignored_logs += 1;
                continue;
            };
            match entry.kind {
                EventKind::SwapV2 | EventKind::SwapV3 => {
                    let family = match entry.kind {
                        EventKind::SwapV2 => PoolFamily::V2,
                        _ => PoolFamily::V3,
                    };
                    let Some(meta) = metadata.pool_metadata(&log.address, family, block.number)?
                    else {
                        diagnostics.unresolved_pool_logs += 1;
                        continue;
                    };
                    if meta.family != family {
                        // A registered topic of one family emitted by a pool
                        // resolved as the other: layout cannot be trusted.
                        diagnostics.malformed_logs += 1;
                        continue;
                    }
                    let decoded = match family {
                        PoolFamily::V2 => decode_v2_swap(&ctx, log, &meta),
                        PoolFamily::V3 => decode_v3_swap(&ctx, log, &meta),
                    };
                    match decoded {
                        Ok(swap) => {
                            diagnostics.decoded_swaps += 1;
                            events.swaps.push(swap);
                        }
                        Err(_) => diagnostics.malformed_logs += 1,
                    }
                }
                EventKind::LiquidationAave | EventKind::LiquidationCompound => {
                    match decode_liquidation(&ctx, log, entry.kind, &entry.family) {
                        Ok(liq) => {
                            diagnostics.decoded_liquidations += 1;
                            events.liquidations.push(liq);
                        }
                        Err(_) => diagnostics.malformed_logs += 1,
                    }
                }
            }
        }
        transactions.push(events);
    }

    Ok(ClassifiedBlock {
        block_number: block.number,
        timestamp: block.timestamp,
        transactions,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::{LogRecord, TransactionRecord};
    use crate::pool::PoolMetadata;
    use crate::registry::topic_for_signature;

    pub(super) fn addr(byte: u8) -> Address {
        Address([byte; 20])
    }

    pub(super) fn usdc_weth_meta() -> PoolMetadata {
        PoolMetadata {
            pool: addr(0x50),
            token0: addr(1), // 6 decimals, stands in for USDC
            token1: addr(2), // 18 decimals, stands in for WETH
            decimals0: 6,
            decimals1: 18,
            family: PoolFamily::V2,
            fee_tier: None,
        }
    }

    struct FixedMetadata(PoolMetadata);

    impl MetadataSource for FixedMetadata {
        fn pool_metadata(
            &self,
            pool: &Address,
            _family: PoolFamily,
            _block: u64,
        ) -> Result<Option<PoolMetadata>, StateError> {
            if *pool == self.0.pool {
                Ok(Some(self.0.clone()))
            } else {
                Ok(None)
            }
        }
    }

    fn v2_swap_log(log_index: u32, pool: Address, amounts: [u64; 4]) -> LogRecord {
        let mut data = Vec::with_capacity(128);
        for amount in amounts {
            data.extend_from_slice(&RawAmount::from(amount).to_word());
        }
        LogRecord {
            address: pool,
            topics: vec![
                topic_for_signature("Swap(address,uint256,uint256,uint256,uint256,address)"),
                B256(addr(0xEE).to_word()),
                B256(addr(0xEF).to_word()),
            ],
            data,
            log_index,
        }
    }

    fn block_with_logs(logs: Vec<LogRecord>) -> BlockData {
        BlockData {
            number: 10,
            timestamp: 1_650_000_000,
            transactions: vec![TransactionRecord {
                hash: B256([0xAB; 32]),
                index: 0,
                sender: addr(0x77),
                recipient: Some(addr(0x78)),
                gas_used: 100_000,
                status: TxStatus::Success,
                logs,
            }],
        }
    }

    #[test]
    fn classify_ignores_unregistered_topics() {
        let mut meta = usdc_weth_meta();
        meta.pool = addr(0x50);
        let log = LogRecord {
            address: meta.pool,
            topics: vec![B256([0x11; 32])],
            data: vec![],
            log_index: 0,
        };
        let block = block_with_logs(vec![log]);
        let classified =
            classify_block(&block, &EventRegistry::standard(), &FixedMetadata(meta)).unwrap();
        assert_eq!(classified.diagnostics.ignored_logs, 1);
        assert_eq!(classified.diagnostics.malformed_logs, 0);
        assert_eq!(classified.swap_count(), 0);
        // Groups exist for every transaction, even when empty.
        assert_eq!(classified.transactions.len(), 1);
        assert!(classified.transactions[0].is_empty());
    }

    #[test]
    fn classify_decodes_registered_swaps_and_counts_totality() {
        let mut meta = usdc_weth_meta();
        meta.pool = addr(0x50);
        let logs = vec![
            v2_swap_log(0, meta.pool, [1000, 0, 0, 600]),
            v2_swap_log(1, meta.pool, [3, 4, 0, 9]), // ambiguous -> malformed
            v2_swap_log(2, addr(0x99), [5, 0, 0, 6]), // unknown pool -> unresolved
            LogRecord {
                address: meta.pool,
                topics: vec![B256([0x22; 32])],
                data: vec![],
                log_index: 3,
            },
        ];
        let block = block_with_logs(logs);
        let total_logs = block.log_count() as u64;
        let classified =
            classify_block(&block, &EventRegistry::standard(), &FixedMetadata(meta)).unwrap();
        let d = &classified.diagnostics;
        assert_eq!(d.decoded_swaps, 1);
        assert_eq!(d.malformed_logs, 1);
        assert_eq!(d.unresolved_pool_logs, 1);
        assert_eq!(d.ignored_logs, 1);
        assert_eq!(d.classified_logs(), total_logs);
    }

    #[test]
    fn classify_counts_reverted_transactions() {
        let mut block = block_with_logs(vec![]);
        block.transactions[0].status = TxStatus::Reverted;
        let meta = usdc_weth_meta();
        let classified =
            classify_block(&block, &EventRegistry::standard(), &FixedMetadata(meta)).unwrap();
        assert_eq!(classified.diagnostics.reverted_txs, 1);
    }
}
