//! Width-bounded bit arithmetic shared by the builders and the reference oracles.
//!
//! Registers are little-endian: bit 0 is the least significant bit. All values
//! are non-negative and bounded by their register width, which is at most
//! [`MAX_WIDTH`] so that `x + d + c0` never overflows a `u64`.

use crate::error::{Error, Result};

/// Largest register width supported by synthesis.
pub const MAX_WIDTH: u32 = 63;

/// `2^width - 1`.
#[inline]
pub fn mask(width: u32) -> u64 {
    debug_assert!(width <= 64);
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// The bit at index `k` of `x`, i.e. `floor(x / 2^k) mod 2`.
#[inline]
pub fn bit_at(x: u64, k: u32) -> bool {
    k < 64 && (x >> k) & 1 == 1
}

/// Majority of three bits, computed as `floor((a + b + c) / 2)`.
#[inline]
pub fn maj(a: bool, b: bool, c: bool) -> bool {
    (a as u8 + b as u8 + c as u8) / 2 == 1
}

/// Majority in product form: `((a ^ c) & (b ^ c)) ^ c`.
///
/// This is the form the circuits compute with a single Toffoli.
#[inline]
pub fn maj_xor_form(a: bool, b: bool, c: bool) -> bool {
    ((a ^ c) & (b ^ c)) ^ c
}

/// A classical offset `d` together with the register width it is added into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OffsetConstant {
    value: u64,
    width: u32,
}

impl OffsetConstant {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::WidthOutOfRange { width, max: MAX_WIDTH });
        }
        if value > mask(width) {
            return Err(Error::OffsetOutOfRange { value, width });
        }
        Ok(Self { value, width })
    }

    /// The all-ones offset `2^width - 1`, the worst case for gate counts.
    pub fn all_ones(width: u32) -> Result<Self> {
        Self::new(mask(width.min(MAX_WIDTH)), width)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// The offset bit `d_k`. Bits at or above the width are zero.
    pub fn bit(&self, k: u32) -> bool {
        k < self.width && bit_at(self.value, k)
    }
}

/// The carries flipped into a sum, truncated to `width` bits.
///
/// Bit 0 is always the carry-in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CarryWord {
    bits: u64,
    width: u32,
}

impl CarryWord {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bit(&self, k: u32) -> bool {
        k < self.width && bit_at(self.bits, k)
    }

    /// `floor(carry / 2)`: the carries `c_1..c_{width-1}`, as xored by the carry-xor circuit.
    pub fn shifted(&self) -> u64 {
        self.bits >> 1
    }
}

/// `carry(x, d, c0) = x ^ d ^ (x + d + c0)`, truncated to `n` bits.
///
/// Inputs are reduced mod `2^n` first.
pub fn carry(x: u64, d: u64, c0: bool, n: u32) -> CarryWord {
    let m = mask(n);
    let (x, d) = (x & m, d & m);
    let sum = x + d + c0 as u64;
    CarryWord {
        bits: (x ^ d ^ sum) & m,
        width: n,
    }
}

/// The overflow carry `c_n`, i.e. bit `n` of `x + d + c0`.
pub fn carry_out(x: u64, d: u64, c0: bool, n: u32) -> bool {
    let m = mask(n);
    bit_at((x & m) + (d & m) + c0 as u64, n)
}

/// `(x + d + c0) mod 2^n`.
pub fn reference_add(x: u64, d: u64, c0: bool, n: u32) -> u64 {
    let m = mask(n);
    ((x & m) + (d & m) + c0 as u64) & m
}

/// Bitwise complement within `n` bits: `2^n - 1 - x`.
pub fn complement(x: u64, n: u32) -> u64 {
    !x & mask(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry word built bit by bit from the majority recurrence.
    fn carry_by_recurrence(x: u64, d: u64, c0: bool, n: u32) -> u64 {
        let mut c = c0;
        let mut out = 0u64;
        for k in 0..n {
            if c {
                out |= 1 << k;
            }
            c = maj(bit_at(x, k), bit_at(d, k), c);
        }
        out
    }

    #[test]
    fn bit_at_examples() {
        // 43 = 0b101011
        assert!(bit_at(43, 0));
        assert!(bit_at(43, 1));
        assert!(!bit_at(43, 2));
        assert!(bit_at(43, 5));
        assert!(!bit_at(43, 6));
        for k in 0..70 {
            assert!(!bit_at(0, k));
        }
        // 279 = 0b100010111
        assert!(bit_at(279, 8));
        let set: Vec<u32> = (0..9).filter(|&k| bit_at(279, k)).collect();
        assert_eq!(set, vec![0, 1, 2, 4, 8]);
    }

    #[test]
    fn maj_forms_agree() {
        assert!(!maj(false, false, false));
        assert!(maj(true, true, false));
        for t in 0..8u8 {
            let (a, b, c) = (t & 1 == 1, t & 2 == 2, t & 4 == 4);
            assert_eq!(maj(a, b, c), maj_xor_form(a, b, c), "triple {t:03b}");
        }
    }

    #[test]
    fn carry_examples() {
        assert_eq!(carry(5, 3, false, 4).bits(), 14);
        for d in 0..64 {
            assert_eq!(carry(0, d, false, 6).bits(), 0);
        }
    }

    #[test]
    fn carry_matches_recurrence_exhaustively() {
        let n = 6;
        for x in 0..64 {
            for d in 0..64 {
                for c0 in [false, true] {
                    let w = carry(x, d, c0, n);
                    assert_eq!(w.bits(), carry_by_recurrence(x, d, c0, n));
                    assert_eq!(w.bit(0), c0);
                }
            }
        }
    }

    #[test]
    fn carry_out_is_bit_n() {
        assert!(carry_out(63, 1, false, 6));
        assert!(!carry_out(62, 1, false, 6));
        assert!(carry_out(32, 31, true, 6));
        // c_n is the majority applied one step past the truncated word
        for x in 0..32 {
            for d in 0..32 {
                for c0 in [false, true] {
                    let w = carry(x, d, c0, 5);
                    let expect = maj(bit_at(x, 4), bit_at(d, 4), w.bit(4));
                    assert_eq!(carry_out(x, d, c0, 5), expect);
                }
            }
        }
    }

    #[test]
    fn reference_add_examples() {
        assert_eq!(reference_add(0, 43, false, 6), 43);
        assert_eq!(reference_add(63, 1, false, 6), 0);
        assert_eq!(reference_add(21, 43, true, 6), 1);
    }

    #[test]
    fn sum_reconstructs_from_carry() {
        for n in 1..=7 {
            for x in 0..1u64 << n {
                for d in 0..1u64 << n {
                    for c0 in [false, true] {
                        let w = carry(x, d, c0, n);
                        assert_eq!(reference_add(x, d, c0, n), (x ^ d ^ w.bits()) & mask(n));
                    }
                }
            }
        }
    }

    #[test]
    fn offset_constant_bounds() {
        assert!(OffsetConstant::new(64, 6).is_err());
        assert!(OffsetConstant::new(0, 0).is_err());
        assert!(OffsetConstant::new(0, 64).is_err());
        let d = OffsetConstant::new(43, 6).unwrap();
        assert!(d.bit(0) && d.bit(1) && !d.bit(2) && d.bit(5) && !d.bit(6));
        assert_eq!(OffsetConstant::all_ones(5).unwrap().value(), 31);
    }
}
