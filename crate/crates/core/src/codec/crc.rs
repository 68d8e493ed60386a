use crate::error::{Error, Result};

/// A CRC over GF(2), first message bit = highest degree coefficient.
/// `polynomial` includes the leading `x^length` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcConfig {
    length: usize,
    polynomial: u64,
}

impl CrcConfig {
    pub fn new(length: usize, polynomial: u64) -> Result<Self> {
        if length == 0 || length > 63 {
            return Err(Error::InvalidParameter(format!("unsupported CRC length {length}")));
        }
        if polynomial >> length != 1 {
            return Err(Error::InvalidParameter(format!("polynomial {polynomial:#x} does not have degree {length}")));
        }
        Ok(Self { length, polynomial })
    }

    /// `x^11 + x^10 + x^9 + x^5 + 1`, the 5G NR CRC11.
    pub fn crc11() -> Self {
        Self { length: 11, polynomial: 0xE21 }
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polynomial(&self) -> u64 {
        self.polynomial
    }

    /// Remainder of `m(x) x^c mod g(x)`, most significant bit first.
    pub fn remainder(&self, message: &[u8]) -> Vec<u8> {
        let c = self.length;
        let mask = (1u64 << c) - 1;
        let low = self.polynomial & mask;
        let mut reg = 0u64;
        for &bit in message {
            let feedback = ((reg >> (c - 1)) & 1) ^ u64::from(bit & 1);
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= low;
            }
        }
        (0..c).rev().map(|i| ((reg >> i) & 1) as u8).collect()
    }

    /// `message ‖ remainder(message)`.
    pub fn attach(&self, message: &[u8]) -> Vec<u8> {
        let mut out = message.to_vec();
        out.extend(self.remainder(message));
        out
    }

    /// True when the trailing `c` bits are the CRC of the rest.
    pub fn check(&self, word: &[u8]) -> bool {
        if word.len() < self.length {
            return false;
        }
        let (msg, crc) = word.split_at(word.len() - self.length);
        self.remainder(msg) == crc
    }
}
