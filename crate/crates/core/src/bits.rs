//! Text forms of bit vectors: binary strings (`"101011"`) and hex
//! (`"0xac"`, most significant bit first).

use crate::error::{Error, Result};

pub fn parse_binary(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidInput(format!("unexpected character {other:?} in bit string"))),
        })
        .collect()
}

pub fn format_binary(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses hex digits into exactly `len` bits. The digits must cover `len`
/// bits (`⌈len/4⌉` digits) and any padding bits at the end must be zero.
pub fn parse_hex(s: &str, len: usize) -> Result<Vec<u8>> {
    let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
    if digits.len() != len.div_ceil(4) {
        return Err(Error::InvalidInput(format!(
            "{len} bits need {} hex digits, got {}",
            len.div_ceil(4),
            digits.len()
        )));
    }
    let mut bits = Vec::with_capacity(digits.len() * 4);
    for c in digits.chars() {
        let v =
            c.to_digit(16).ok_or_else(|| Error::InvalidInput(format!("unexpected character {c:?} in hex string")))?;
        bits.extend((0..4).rev().map(|s| ((v >> s) & 1) as u8));
    }
    if bits[len..].iter().any(|&b| b != 0) {
        return Err(Error::InvalidInput("nonzero padding bits in hex string".into()));
    }
    bits.truncate(len);
    Ok(bits)
}

pub fn format_hex(bits: &[u8]) -> String {
    let mut out = String::from("0x");
    for chunk in bits.chunks(4) {
        let v = chunk.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (u32::from(b & 1) << (3 - i)));
        out.push(char::from_digit(v, 16).expect("nibble"));
    }
    out
}

/// Accepts either form: a `0x` prefix selects hex, anything else is binary.
pub fn parse_bits(s: &str, len: usize) -> Result<Vec<u8>> {
    let s = s.trim();
    let bits = if s.starts_with("0x") || s.starts_with("0X") { parse_hex(s, len)? } else { parse_binary(s)? };
    if bits.len() != len {
        return Err(Error::InvalidInput(format!("expected {len} bits, got {}", bits.len())));
    }
    Ok(bits)
}

pub fn hamming_weight(bits: &[u8]) -> usize {
    bits.iter().filter(|&&b| b & 1 == 1).count()
}
