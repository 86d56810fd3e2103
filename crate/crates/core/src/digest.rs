//! 256-bit content addresses with per-kind domain separation.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest as _, Sha256};

use crate::error::Error;

/// Domain-separation byte hashed ahead of every payload, one per object kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Domain {
    Node = 0x01,
    DagManifest = 0x02,
    ProjectionManifest = 0x03,
    Fragment = 0x04,
    Commitment = 0x05,
    Statement = 0x06,
}

/// A 256-bit content address.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest([u8; 32]);

impl Digest {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(text: &str) -> Result<Self, Error> {
        let bytes = hex::decode(text).map_err(|_| Error::MalformedDigest {
            text: text.to_string(),
        })?;
        let array: [u8; 32] = bytes.try_into().map_err(|_| Error::MalformedDigest {
            text: text.to_string(),
        })?;
        Ok(Digest(array))
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({}..)", &self.to_hex()[..12])
    }
}

impl FromStr for Digest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Digest::from_hex(s)
    }
}

/// Hash `payload` under the given domain tag.
pub fn hash_payload(domain: Domain, payload: &[u8]) -> Digest {
    let mut hasher = Sha256::new();
    hasher.update([domain as u8]);
    hasher.update(payload);
    Digest(hasher.finalize().into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains_separate_identical_payloads() {
        let a = hash_payload(Domain::Node, b"x");
        let b = hash_payload(Domain::DagManifest, b"x");
        assert_ne!(a, b);
    }

    #[test]
    fn hex_round_trip() {
        let d = hash_payload(Domain::Statement, b"clause:1,-2");
        let back = Digest::from_hex(&d.to_hex()).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn rejects_short_hex() {
        assert!(Digest::from_hex("abcd").is_err());
        assert!(Digest::from_hex("zz").is_err());
    }
}
