//! Pool metadata and the block-pinned chain-state abstraction.
//!
//! Everything downstream of ingestion reads chain state through
//! [`StateSource`], so the same pipeline runs against a JSON-RPC archive node
//! or a recorded state fixture.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primitives::{Address, RawAmount};

/// AMM protocol family, which fixes the swap-event layout and the state
/// reads used for pricing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoolFamily {
    V2,
    V3,
}

impl std::fmt::Display for PoolFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PoolFamily::V2 => write!(f, "v2"),
            PoolFamily::V3 => write!(f, "v3"),
        }
    }
}

/// Immutable facts about a pool, resolved once and cached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolMetadata {
    pub pool: Address,
    pub token0: Address,
    pub token1: Address,
    pub decimals0: u8,
    pub decimals1: u8,
    pub family: PoolFamily,
    pub fee_tier: Option<u32>,
}

impl PoolMetadata {
    /// Token decimal counts are bounded; anything outside is treated as a
    /// broken token contract.
    pub const MAX_DECIMALS: u8 = 36;

    pub fn is_canonical(&self) -> bool {
        self.token0 < self.token1
            && self.decimals0 <= Self::MAX_DECIMALS
            && self.decimals1 <= Self::MAX_DECIMALS
    }

    /// The other side of the pool, if `token` is one of the pair.
    pub fn counterpart(&self, token: &Address) -> Option<Address> {
        if *token == self.token0 {
            Some(self.token1)
        } else if *token == self.token1 {
            Some(self.token0)
        } else {
            None
        }
    }
}

/// Uniswap-V3-style pool state at a block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct V3PoolState {
    pub sqrt_price_x96: RawAmount,
    pub liquidity: u128,
}

#[derive(Debug, Error)]
pub enum StateError {
    /// Transport-level failure: worth retrying, distinct from "no such state".
    #[error("state read failed (retriable): {0}")]
    Transport(String),
    #[error("malformed state response: {0}")]
    InvalidResponse(String),
}

/// Block-pinned chain-state reads. Absent state (no contract, no pair,
/// reverted call) is `Ok(None)`; transport failures are `Err`.
pub trait StateSource: Send + Sync {
    /// token0()/token1() of a pool contract.
    fn pool_tokens(&self, pool: &Address, block: u64) -> Result<Option<(Address, Address)>, StateError>;

    /// fee() of a V3-style pool. `None` when the pool does not expose one.
    fn pool_fee_tier(&self, pool: &Address, block: u64) -> Result<Option<u32>, StateError>;

    fn token_decimals(&self, token: &Address, block: u64) -> Result<Option<u8>, StateError>;

    fn v2_reserves(&self, pool: &Address, block: u64) -> Result<Option<(RawAmount, RawAmount)>, StateError>;

    fn v3_pool_state(&self, pool: &Address, block: u64) -> Result<Option<V3PoolState>, StateError>;

    /// Factory getPair lookup (V2 family).
    fn v2_pair_for(
        &self,
        factory: &Address,
        token_a: &Address,
        token_b: &Address,
        block: u64,
    ) -> Result<Option<Address>, StateError>;

    /// Factory getPool lookup at one fee tier (V3 family).
    fn v3_pool_for(
        &self,
        factory: &Address,
        token_a: &Address,
        token_b: &Address,
        fee: u32,
        block: u64,
    ) -> Result<Option<Address>, StateError>;
}

/// Pool-metadata lookups as the classifier consumes them. `Ok(None)` marks a
/// pool as unresolvable; its swaps are skipped and counted in diagnostics.
pub trait MetadataSource: Send + Sync {
    fn pool_metadata(
        &self,
        pool: &Address,
        family: PoolFamily,
        block: u64,
    ) -> Result<Option<PoolMetadata>, StateError>;
}
