//! Block, transaction, and log records: the unit of ingestion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primitives::{Address, B256};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockValidationError {
    #[error("block {block}: transaction indices not strictly increasing at position {position}")]
    TxOrder { block: u64, position: usize },
    #[error("block {block}, tx {tx}: reverted transaction carries {logs} logs")]
    RevertedWithLogs { block: u64, tx: B256, logs: usize },
    #[error("block {block}, tx {tx}: log indices not strictly increasing")]
    LogOrder { block: u64, tx: B256 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TxStatus {
    Success,
    Reverted,
}

/// One emitted event record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogRecord {
    pub address: Address,
    pub topics: Vec<B256>,
    #[serde(with = "hex_bytes")]
    pub data: Vec<u8>,
    pub log_index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionRecord {
    pub hash: B256,
    pub index: u32,
    pub sender: Address,
    pub recipient: Option<Address>,
    pub gas_used: u64,
    pub status: TxStatus,
    pub logs: Vec<LogRecord>,
}

/// A block with its transactions and per-transaction receipt logs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockData {
    pub number: u64,
    pub timestamp: u64,
    pub transactions: Vec<TransactionRecord>,
}

impl BlockData {
    /// Checks the structural invariants: transaction order, log order, and
    /// that reverted transactions carry no logs.
    pub fn validate(&self) -> Result<(), BlockValidationError> {
        let mut prev_index: Option<u32> = None;
        for (pos, tx) in self.transactions.iter().enumerate() {
            if let Some(prev) = prev_index {
                if tx.index <= prev {
                    return Err(BlockValidationError::TxOrder { block: self.number, position: pos });
                }
            }
            prev_index = Some(tx.index);
            if tx.status == TxStatus::Reverted && !tx.logs.is_empty() {
                return Err(BlockValidationError::RevertedWithLogs {
                    block: self.number,
                    tx: tx.hash,
                    logs: tx.logs.len(),
                });
            }
            let mut prev_log: Option<u32> = None;
            for log in &tx.logs {
                if let Some(prev) = prev_log {
                    if log.log_index <= prev {
                        return Err(BlockValidationError::LogOrder { block: self.number, tx: tx.hash });
                    }
                }
                prev_log = Some(log.log_index);
            }
        }
        Ok(())
    }

    pub fn log_count(&self) -> usize {
        self.transactions.iter().map(|tx| tx.logs.len()).sum()
    }
}

/// Serde helper: byte payloads as 0x-prefixed hex strings.
pub mod hex_bytes {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("0x{}", hex::encode(bytes)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(deserializer)?;
        let body = s.strip_prefix("0x").unwrap_or(&s);
        hex::decode(body).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log(index: u32) -> LogRecord {
        LogRecord { address: Address::ZERO, topics: vec![B256::ZERO], data: vec![], log_index: index }
    }

    fn tx(index: u32, status: TxStatus, logs: Vec<LogRecord>) -> TransactionRecord {
        TransactionRecord {
            hash: B256([index as u8; 32]),
            index,
            sender: Address::ZERO,
            recipient: None,
            gas_used: 21_000,
            status,
            logs,
        }
    }

    #[test]
    fn validate_accepts_well_formed_block() {
        let block = BlockData {
            number: 7,
            timestamp: 1_700_000_000,
            transactions: vec![
                tx(0, TxStatus::Success, vec![log(0), log(1)]),
                tx(1, TxStatus::Reverted, vec![]),
                tx(4, TxStatus::Success, vec![log(5)]),
            ],
        };
        assert_eq!(block.validate(), Ok(()));
        assert_eq!(block.log_count(), 3);
    }

    #[test]
    fn validate_rejects_unordered_transactions() {
        let block = BlockData {
            number: 1,
            timestamp: 0,
            transactions: vec![tx(2, TxStatus::Success, vec![]), tx(1, TxStatus::Success, vec![])],
        };
        assert!(matches!(block.validate(), Err(BlockValidationError::TxOrder { .. })));
    }

    #[test]
    fn validate_rejects_reverted_with_logs() {
        let block = BlockData {
            number: 1,
            timestamp: 0,
            transactions: vec![tx(0, TxStatus::Reverted, vec![log(0)])],
        };
        assert!(matches!(block.validate(), Err(BlockValidationError::RevertedWithLogs { .. })));
    }

    #[test]
    fn validate_rejects_unordered_logs() {
        let block = BlockData {
            number: 1,
            timestamp: 0,
            transactions: vec![tx(0, TxStatus::Success, vec![log(3), log(3)])],
        };
        assert!(matches!(block.validate(), Err(BlockValidationError::LogOrder { .. })));
    }

    #[test]
    fn block_json_round_trip() {
        let block = BlockData {
            number: 42,
            timestamp: 1_650_000_000,
            transactions: vec![tx(0, TxStatus::Success, vec![log(0)])],
        };
        let json = serde_json::to_string(&block).unwrap();
        let back: BlockData = serde_json::from_str(&json).unwrap();
        assert_eq!(back, block);
    }
}
