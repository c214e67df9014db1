//! V2- and V3-style swap event decoding.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use crate::block::LogRecord;
use crate::pool::{PoolFamily, PoolMetadata};
use crate::primitives::{Address, RawAmount};

use super::{DecodeError, SwapEvent, TxContext};

/// Splits zero-padded log data into 32-byte words.
fn data_words(log: &LogRecord, min_words: usize) -> Result<Vec<&[u8]>, DecodeError> {
    let words: Vec<&[u8]> = log.data.chunks_exact(32).collect();
    if words.len() < min_words || log.data.len() % 32 != 0 {
        return Err(DecodeError::TruncatedData { expected: min_words, got: words.len() });
    }
    Ok(words)
}

fn expect_topics(log: &LogRecord, expected: usize) -> Result<(), DecodeError> {
    if log.topics.len() != expected {
        return Err(DecodeError::TopicCount { expected, got: log.topics.len() });
    }
    Ok(())
}

/// Address from an indexed topic (right-aligned 20 bytes).
fn topic_address(log: &LogRecord, index: usize) -> Address {
    let mut out = [0u8; 20];
    out.copy_from_slice(&log.topics[index].0[12..]);
    Address(out)
}

/// Signed 256-bit word as (negative, magnitude), two's complement.
fn decode_int256(word: &[u8]) -> (bool, BigUint) {
    let value = BigUint::from_bytes_be(word);
    if word[0] & 0x80 == 0 {
        (false, value)
    } else {
        let modulus = BigUint::from(1u8) << 256;
        (true, modulus - value)
    }
}

/// Decodes a Uniswap-V2-family `Swap` log.
///
/// Data layout: `amount0In, amount1In, amount0Out, amount1Out`. A valid swap
/// has exactly one token flowing in and one flowing out; after netting
/// In−Out per token, anything that still claims flows in more than one
/// direction per side (for example both In words nonzero) is rejected as
/// ambiguous and counted as malformed.
pub fn decode_v2_swap(
    ctx: &TxContext,
    log: &LogRecord,
    meta: &PoolMetadata,
) -> Result<SwapEvent, DecodeError> {
    debug_assert_eq!(meta.family, PoolFamily::V2);
    expect_topics(log, 3)?;
    let words = data_words(log, 4)?;
    let amount0_in = BigUint::from_bytes_be(words[0]);
    let amount1_in = BigUint::from_bytes_be(words[1]);
    let amount0_out = BigUint::from_bytes_be(words[2]);
    let amount1_out = BigUint::from_bytes_be(words[3]);

    // Direction must be unambiguous in the raw words: exactly one nonzero In
    // and one nonzero Out, on opposite tokens.
    let ins = [!amount0_in.is_zero(), !amount1_in.is_zero()];
    let outs = [!amount0_out.is_zero(), !amount1_out.is_zero()];
    if ins.iter().filter(|v| **v).count() != 1 {
        return Err(DecodeError::MalformedSwap("ambiguous or missing in-flow"));
    }
    if outs.iter().filter(|v| **v).count() != 1 {
        return Err(DecodeError::MalformedSwap("ambiguous or missing out-flow"));
    }
    let (token_in, token_out, amount_in, amount_out) = if ins[0] && outs[1] {
        (meta.token0, meta.token1, amount0_in, amount1_out)
    } else if ins[1] && outs[0] {
        (meta.token1, meta.token0, amount1_in, amount0_out)
    } else {
        // In and Out on the same token nets to a one-sided flow, not a swap.
        return Err(DecodeError::MalformedSwap("in and out on the same token"));
    };

    Ok(SwapEvent {
        tx_hash: ctx.tx_hash,
        block_number: ctx.block_number,
        log_index: log.log_index,
        pool: log.address,
        token_in,
        token_out,
        amount_in: RawAmount::from_biguint(amount_in)
            .map_err(|_| DecodeError::MalformedSwap("amount exceeds 256 bits"))?,
        amount_out: RawAmount::from_biguint(amount_out)
            .map_err(|_| DecodeError::MalformedSwap("amount exceeds 256 bits"))?,
        initiator: ctx.initiator,
        recipient: topic_address(log, 2),
    })
}

/// Decodes a Uniswap-V3-family `Swap` log.
///
/// `amount0`/`amount1` are signed: positive means the token flowed into the
/// pool, negative means it flowed out. Exactly one of each is required.
pub fn decode_v3_swap(
    ctx: &TxContext,
    log: &LogRecord,
    meta: &PoolMetadata,
) -> Result<SwapEvent, DecodeError> {
    debug_assert_eq!(meta.family, PoolFamily::V3);
    expect_topics(log, 3)?;
    let words = data_words(log, 2)?;
    let (neg0, mag0) = decode_int256(words[0]);
    let (neg1, mag1) = decode_int256(words[1]);

    if mag0.is_zero() || mag1.is_zero() {
        return Err(DecodeError::MalformedSwap("zero swap amount"));
    }
    if neg0 == neg1 {
        return Err(DecodeError::MalformedSwap("both amounts on the same side"));
    }
    let (token_in, token_out, amount_in, amount_out) = if !neg0 {
        (meta.token0, meta.token1, mag0, mag1)
    } else {
        (meta.token1, meta.token0, mag1, mag0)
    };

    Ok(SwapEvent {
        tx_hash: ctx.tx_hash,
        block_number: ctx.block_number,
        log_index: log.log_index,
        pool: log.address,
        token_in,
        token_out,
        amount_in: RawAmount::from_biguint(amount_in)
            .map_err(|_| DecodeError::MalformedSwap("amount exceeds 256 bits"))?,
        amount_out: RawAmount::from_biguint(amount_out)
            .map_err(|_| DecodeError::MalformedSwap("amount exceeds 256 bits"))?,
        initiator: ctx.initiator,
        recipient: topic_address(log, 2),
    })
}

/// ABI word for a signed amount (two's complement), for fixture assembly.
pub fn int256_word(negative: bool, magnitude: &BigUint) -> [u8; 32] {
    let value = if negative && !magnitude.is_zero() {
        let modulus = BigInt::from(1u8) << 256;
        let v = modulus - BigInt::from_biguint(Sign::Plus, magnitude.clone());
        v.to_biguint().expect("positive after wrap")
    } else {
        magnitude.clone()
    };
    let bytes = value.to_bytes_be();
    let mut word = [0u8; 32];
    word[32 - bytes.len()..].copy_from_slice(&bytes);
    word
}
