//! Lending-protocol liquidation event decoding.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::block::LogRecord;
use crate::primitives::{Address, RawAmount};
use crate::registry::EventKind;

use super::{DecodeError, LiquidationEvent, TxContext};

fn word_amount(word: &[u8]) -> Result<RawAmount, DecodeError> {
    RawAmount::from_biguint(BigUint::from_bytes_be(word))
        .map_err(|_| DecodeError::InvariantViolation("amount exceeds 256 bits"))
}

fn word_address(word: &[u8]) -> Result<Address, DecodeError> {
    Address::from_word(word).ok_or(DecodeError::InvariantViolation("word is not an address"))
}

fn topic_as_address(log: &LogRecord, index: usize) -> Result<Address, DecodeError> {
    word_address(&log.topics[index].0)
}

/// Decodes a registered liquidation log into a typed event.
///
/// Two layouts are supported:
/// - Aave-style `LiquidationCall(collateral, debt, user indexed; debtToCover,
///   liquidatedCollateralAmount, liquidator, receiveAToken)`
/// - Compound-style `LiquidateBorrow(liquidator, borrower, repayAmount,
///   cTokenCollateral, seizeTokens)` with no indexed parameters, where the
///   emitting market address stands in for the debt token.
pub fn decode_liquidation(
    ctx: &TxContext,
    log: &LogRecord,
    kind: EventKind,
    protocol: &str,
) -> Result<LiquidationEvent, DecodeError> {
    let words: Vec<&[u8]> = log.data.chunks_exact(32).collect();
    let event = match kind {
        EventKind::LiquidationAave => {
            if log.topics.len() != 4 {
                return Err(DecodeError::TopicCount { expected: 4, got: log.topics.len() });
            }
            if words.len() < 3 {
                return Err(DecodeError::TruncatedData { expected: 3, got: words.len() });
            }
            LiquidationEvent {
                tx_hash: ctx.tx_hash,
                block_number: ctx.block_number,
                log_index: log.log_index,
                protocol: protocol.to_string(),
                collateral_token: topic_as_address(log, 1)?,
                debt_token: topic_as_address(log, 2)?,
                borrower: topic_as_address(log, 3)?,
                debt_repaid: word_amount(words[0])?,
                collateral_seized: word_amount(words[1])?,
                liquidator: word_address(words[2])?,
            }
        }
        EventKind::LiquidationCompound => {
            if log.topics.len() != 1 {
                return Err(DecodeError::TopicCount { expected: 1, got: log.topics.len() });
            }
            if words.len() < 5 {
                return Err(DecodeError::TruncatedData { expected: 5, got: words.len() });
            }
            LiquidationEvent {
                tx_hash: ctx.tx_hash,
                block_number: ctx.block_number,
                log_index: log.log_index,
                protocol: protocol.to_string(),
                liquidator: word_address(words[0])?,
                borrower: word_address(words[1])?,
                debt_repaid: word_amount(words[2])?,
                // The emitting market is the debt-side contract.
                debt_token: log.address,
                collateral_token: word_address(words[3])?,
                collateral_seized: word_amount(words[4])?,
            }
        }
        EventKind::SwapV2 | EventKind::SwapV3 => {
            return Err(DecodeError::InvariantViolation("not a liquidation kind"))
        }
    };

    if event.debt_repaid.is_zero() {
        return Err(DecodeError::InvariantViolation("zero debt repaid"));
    }
    if event.collateral_seized.is_zero() {
        return Err(DecodeError::InvariantViolation("zero collateral seized"));
    }
    Ok(event)
}

#[cfg(test)]
mod tests {
    use super::super::tests::addr;
    use super::*;
    use crate::primitives::B256;
    use crate::registry::topic_for_signature;

    fn ctx() -> TxContext {
        TxContext { block_number: 55, tx_hash: B256([0xCD; 32]), initiator: addr(0x30) }
    }

    /// Hand-assembled Aave-style LiquidationCall log following the protocol's
    /// event layout: three indexed addresses, then debtToCover,
    /// liquidatedCollateralAmount, liquidator, receiveAToken in data.
    fn aave_log(debt_to_cover: u64, collateral_amount: u64) -> LogRecord {
        let mut data = Vec::new();
        data.extend_from_slice(&RawAmount::from(debt_to_cover).to_word());
        data.extend_from_slice(&RawAmount::from(collateral_amount).to_word());
        data.extend_from_slice(&addr(0x99).to_word()); // liquidator
        data.extend_from_slice(&[0u8; 32]); // receiveAToken = false
        LogRecord {
            address: addr(0xA0),
            topics: vec![
                topic_for_signature(
                    "LiquidationCall(address,address,address,uint256,uint256,address,bool)",
                ),
                B256(addr(0x11).to_word()), // collateral asset
                B256(addr(0x12).to_word()), // debt asset
                B256(addr(0x13).to_word()), // borrower
            ],
            data,
            log_index: 4,
        }
    }

    fn compound_log(repay: u64, seize: u64) -> LogRecord {
        let mut data = Vec::new();
        data.extend_from_slice(&addr(0x99).to_word()); // liquidator
        data.extend_from_slice(&addr(0x13).to_word()); // borrower
        data.extend_from_slice(&RawAmount::from(repay).to_word());
        data.extend_from_slice(&addr(0x21).to_word()); // collateral market
        data.extend_from_slice(&RawAmount::from(seize).to_word());
        LogRecord {
            address: addr(0xB0),
            topics: vec![topic_for_signature(
                "LiquidateBorrow(address,address,uint256,address,uint256)",
            )],
            data,
            log_index: 7,
        }
    }

    #[test]
    fn aave_layout_round_trips() {
        let event =
            decode_liquidation(&ctx(), &aave_log(150, 100), EventKind::LiquidationAave, "aave-v2")
                .unwrap();
        assert_eq!(event.collateral_token, addr(0x11));
        assert_eq!(event.debt_token, addr(0x12));
        assert_eq!(event.borrower, addr(0x13));
        assert_eq!(event.liquidator, addr(0x99));
        assert_eq!(event.debt_repaid, RawAmount::from(150u64));
        assert_eq!(event.collateral_seized, RawAmount::from(100u64));
        assert_eq!(event.protocol, "aave-v2");
    }

    #[test]
    fn aave_wrong_topic_count_is_decode_error() {
        let mut log = aave_log(150, 100);
        log.topics.pop();
        assert_eq!(
            decode_liquidation(&ctx(), &log, EventKind::LiquidationAave, "aave-v2"),
            Err(DecodeError::TopicCount { expected: 4, got: 3 })
        );
    }

    #[test]
    fn aave_zero_debt_violates_invariant() {
        assert_eq!(
            decode_liquidation(&ctx(), &aave_log(0, 100), EventKind::LiquidationAave, "aave-v2"),
            Err(DecodeError::InvariantViolation("zero debt repaid"))
        );
    }

    #[test]
    fn compound_layout_round_trips() {
        let event = decode_liquidation(
            &ctx(),
            &compound_log(500, 320),
            EventKind::LiquidationCompound,
            "compound",
        )
        .unwrap();
        assert_eq!(event.liquidator, addr(0x99));
        assert_eq!(event.borrower, addr(0x13));
        assert_eq!(event.debt_token, addr(0xB0));
        assert_eq!(event.collateral_token, addr(0x21));
        assert_eq!(event.debt_repaid, RawAmount::from(500u64));
        assert_eq!(event.collateral_seized, RawAmount::from(320u64));
    }

    #[test]
    fn compound_truncated_data_is_decode_error() {
        let mut log = compound_log(500, 320);
        log.data.truncate(4 * 32);
        assert_eq!(
            decode_liquidation(&ctx(), &log, EventKind::LiquidationCompound, "compound"),
            Err(DecodeError::TruncatedData { expected: 5, got: 4 })
        );
    }
}
