//! Event signature registry: maps log topic-0 hashes to the protocol events
//! the pipeline knows how to decode.
//!
//! Topic hashes are always computed from canonical signature text at load
//! time, never hand-entered, and re-verified before use.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha3::{Digest, Keccak256};
use thiserror::Error;

use crate::primitives::B256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("signature {0:?} is not canonical (expected name + parenthesized types, no spaces)")]
    MalformedSignature(String),
    #[error("duplicate topic {topic} for signatures {first:?} and {second:?}")]
    DuplicateTopic { topic: B256, first: String, second: String },
    #[error("registry entry {signature:?}: stored topic {stored} does not match recomputed {computed}")]
    TopicMismatch { signature: String, stored: B256, computed: B256 },
}

/// keccak-256 over arbitrary bytes.
pub fn keccak256(data: &[u8]) -> B256 {
    let mut hasher = Keccak256::new();
    hasher.update(data);
    B256(hasher.finalize().into())
}

/// Topic 0 for a canonical event signature: keccak-256 of its UTF-8 bytes.
pub fn topic_for_signature(signature: &str) -> B256 {
    keccak256(signature.as_bytes())
}

/// 4-byte function selector for a canonical function signature.
pub fn selector(signature: &str) -> [u8; 4] {
    let hash = keccak256(signature.as_bytes());
    [hash.0[0], hash.0[1], hash.0[2], hash.0[3]]
}

/// Decode layout for a registered event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SwapV2,
    SwapV3,
    LiquidationAave,
    LiquidationCompound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub kind: EventKind,
    /// Protocol family label ("uniswap-v2", "quickswap", ...), informational.
    pub family: String,
    pub signature: String,
}

/// Extension entry as it appears in chain config files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryExtension {
    pub signature: String,
    pub family: String,
    pub kind: EventKind,
}

/// Immutable topic → event mapping used by the classifier.
#[derive(Debug, Clone)]
pub struct EventRegistry {
    entries: HashMap<B256, RegistryEntry>,
}

const STANDARD_ENTRIES: &[(&str, &str, EventKind)] = &[
    (
        "Swap(address,uint256,uint256,uint256,uint256,address)",
        "uniswap-v2",
        EventKind::SwapV2,
    ),
    (
        "Swap(address,address,int256,int256,uint160,uint128,int24)",
        "uniswap-v3",
        EventKind::SwapV3,
    ),
    (
        "LiquidationCall(address,address,address,uint256,uint256,address,bool)",
        "aave-v2",
        EventKind::LiquidationAave,
    ),
    (
        "LiquidateBorrow(address,address,uint256,address,uint256)",
        "compound",
        EventKind::LiquidationCompound,
    ),
];

fn is_canonical(signature: &str) -> bool {
    !signature.is_empty()
        && !signature.contains(char::is_whitespace)
        && signature.ends_with(')')
        && signature.contains('(')
}

impl EventRegistry {
    /// The built-in registry: Uniswap-V2-family and Uniswap-V3-family swaps,
    /// Aave-style and Compound-style liquidations.
    pub fn standard() -> Self {
        Self::with_extensions(&[]).expect("built-in registry entries are canonical")
    }

    /// Built-in entries plus config-declared extensions. Extensions let new
    /// forks reuse an existing decode layout without code changes.
    pub fn with_extensions(extensions: &[RegistryExtension]) -> Result<Self, RegistryError> {
        let mut entries: HashMap<B256, RegistryEntry> = HashMap::new();
        let standard = STANDARD_ENTRIES.iter().map(|(sig, family, kind)| RegistryExtension {
            signature: (*sig).to_string(),
            family: (*family).to_string(),
            kind: *kind,
        });
        for ext in standard.chain(extensions.iter().cloned()) {
            if !is_canonical(&ext.signature) {
                return Err(RegistryError::MalformedSignature(ext.signature));
            }
            let topic = topic_for_signature(&ext.signature);
            if let Some(existing) = entries.get(&topic) {
                if existing.signature != ext.signature {
                    return Err(RegistryError::DuplicateTopic {
                        topic,
                        first: existing.signature.clone(),
                        second: ext.signature,
                    });
                }
                // Same signature registered twice (config repeats a built-in):
                // harmless, keep the first entry.
                continue;
            }
            entries.insert(
                topic,
                RegistryEntry { kind: ext.kind, family: ext.family, signature: ext.signature },
            );
        }
        let registry = EventRegistry { entries };
        registry.verify()?;
        Ok(registry)
    }

    pub fn lookup(&self, topic: &B256) -> Option<&RegistryEntry> {
        self.entries.get(topic)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&B256, &RegistryEntry)> {
        self.entries.iter()
    }

    /// Recomputes every topic from its signature text and compares with the
    /// stored key. Run at startup; a mismatch means corrupted state.
    pub fn verify(&self) -> Result<(), RegistryError> {
        for (topic, entry) in &self.entries {
            let computed = topic_for_signature(&entry.signature);
            if computed != *topic {
                return Err(RegistryError::TopicMismatch {
                    signature: entry.signature.clone(),
                    stored: *topic,
                    computed,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference vectors: the empty-input keccak-256 digest and the canonical
    // V2 swap topic, both standard published values.
    const KECCAK_EMPTY: &str = "0xc5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470";
    const V2_SWAP_TOPIC: &str = "0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822";

    #[test]
    fn keccak_empty_input_matches_reference() {
        assert_eq!(keccak256(b"").to_string(), KECCAK_EMPTY);
    }

    #[test]
    fn v2_swap_topic_matches_reference() {
        assert_eq!(
            topic_for_signature("Swap(address,uint256,uint256,uint256,uint256,address)").to_string(),
            V2_SWAP_TOPIC
        );
    }

    #[test]
    fn standard_registry_contains_four_entries() {
        let registry = EventRegistry::standard();
        assert_eq!(registry.len(), 4);
        let topic: B256 = V2_SWAP_TOPIC.parse().unwrap();
        let entry = registry.lookup(&topic).expect("v2 swap registered");
        assert_eq!(entry.kind, EventKind::SwapV2);
    }

    #[test]
    fn registry_verify_detects_tampering() {
        let mut registry = EventRegistry::standard();
        let (topic, entry) = registry.entries.iter().next().map(|(t, e)| (*t, e.clone())).unwrap();
        registry.entries.remove(&topic);
        registry.entries.insert(B256([0xAA; 32]), entry);
        assert!(matches!(registry.verify(), Err(RegistryError::TopicMismatch { .. })));
    }

    #[test]
    fn extensions_add_new_forks() {
        let ext = RegistryExtension {
            signature: "Swap(address,address,uint256,uint256,uint256,uint256,address)".to_string(),
            family: "velodrome".to_string(),
            kind: EventKind::SwapV2,
        };
        let registry = EventRegistry::with_extensions(&[ext]).unwrap();
        assert_eq!(registry.len(), 5);
    }

    #[test]
    fn extensions_reject_non_canonical_signatures() {
        let ext = RegistryExtension {
            signature: "Swap(address, uint256)".to_string(),
            family: "x".to_string(),
            kind: EventKind::SwapV2,
        };
        assert!(matches!(
            EventRegistry::with_extensions(&[ext]),
            Err(RegistryError::MalformedSignature(_))
        ));
    }

    #[test]
    fn extensions_reject_conflicting_duplicate() {
        // Same topic can only arise from the same signature; registering the
        // same signature twice is tolerated, keeping one entry.
        let ext = RegistryExtension {
            signature: "Swap(address,uint256,uint256,uint256,uint256,address)".to_string(),
            family: "quickswap".to_string(),
            kind: EventKind::SwapV2,
        };
        let registry = EventRegistry::with_extensions(&[ext]).unwrap();
        assert_eq!(registry.len(), 4);
    }

    #[test]
    fn selector_is_first_four_topic_bytes() {
        let sel = selector("getReserves()");
        let full = topic_for_signature("getReserves()");
        assert_eq!(sel, full.0[..4]);
    }
}
