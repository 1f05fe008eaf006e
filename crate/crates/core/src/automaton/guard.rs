//! Bit-string symbols and `{0,1,*}` guards over them.
//!
//! A symbol of width `n` is a string of `n` bits; position 0 is the leftmost
//! character of its textual form. A [`Guard`] is a cube: a pattern that fixes
//! some positions and leaves the others as don't-care. Guards stand in for the
//! explicit `2^n` alphabet.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported label width.
pub const MAX_WIDTH: usize = 64;

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Removes bit `pos` from `x`, shifting the higher bits down by one.
#[inline]
pub(crate) fn erase_bit(x: u64, pos: usize) -> u64 {
    let low = x & low_mask(pos);
    let high = x.checked_shr(pos as u32 + 1).unwrap_or(0);
    low | high.checked_shl(pos as u32).unwrap_or(0)
}

/// Opens a zero bit at `pos`, shifting bits at `pos` and above up by one.
#[inline]
pub(crate) fn insert_bit(x: u64, pos: usize) -> u64 {
    let low = x & low_mask(pos);
    let high = x.checked_shr(pos as u32).unwrap_or(0);
    low | high.checked_shl(pos as u32 + 1).unwrap_or(0)
}

/// A concrete symbol: a bit string of fixed width.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BitString {
    bits: u64,
    width: u8,
}

impl BitString {
    pub fn new(bits: u64, width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "width {width} exceeds {MAX_WIDTH}");
        BitString {
            bits: bits & low_mask(width),
            width: width as u8,
        }
    }

    pub fn zero(width: usize) -> Self {
        BitString::new(0, width)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut raw = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                raw |= 1 << i;
            }
        }
        BitString::new(raw, bits.len())
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn raw(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos < self.width());
        self.bits >> pos & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        debug_assert!(pos < self.width());
        if value {
            self.bits |= 1 << pos;
        } else {
            self.bits &= !(1 << pos);
        }
    }

    /// Drops position `pos`.
    pub fn erase(&self, pos: usize) -> BitString {
        BitString::new(erase_bit(self.bits, pos), self.width() - 1)
    }

    /// Inserts `value` at position `pos`.
    pub fn insert(&self, pos: usize, value: bool) -> BitString {
        let mut out = BitString::new(insert_bit(self.bits, pos), self.width() + 1);
        out.set(pos, value);
        out
    }

    pub fn parse(text: &str) -> Option<BitString> {
        if text.len() > MAX_WIDTH {
            return None;
        }
        let mut bits = 0u64;
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return None,
            }
        }
        Some(BitString::new(bits, text.len()))
    }

    /// Lexicographic order of the textual form (`0 < 1`, position 0 first).
    pub fn lex_cmp(&self, other: &BitString) -> Ordering {
        lex_cmp_raw(self.bits, other.bits).then(self.width.cmp(&other.width))
    }
}

pub(crate) fn lex_cmp_raw(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let first = diff.trailing_zeros();
    if a >> first & 1 == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A cube over `{0,1}^width`: positions in `care` are fixed to the matching
/// bit of `value`, the rest are don't-care.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Guard {
    care: u64,
    value: u64,
    width: u8,
}

impl Guard {
    /// The all-don't-care guard, matching every symbol of `width`.
    pub fn full(width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "width {width} exceeds {MAX_WIDTH}");
        Guard {
            care: 0,
            value: 0,
            width: width as u8,
        }
    }

    pub fn symbol(sym: BitString) -> Self {
        Guard {
            care: low_mask(sym.width()),
            value: sym.raw(),
            width: sym.width,
        }
    }

    /// The guard matching only the all-zero symbol.
    pub fn zero(width: usize) -> Self {
        Guard::symbol(BitString::zero(width))
    }

    /// Returns a copy with position `pos` fixed to `bit`.
    pub fn with(mut self, pos: usize, bit: bool) -> Self {
        assert!(pos < self.width(), "position {pos} out of range");
        self.care |= 1 << pos;
        if bit {
            self.value |= 1 << pos;
        } else {
            self.value &= !(1 << pos);
        }
        self
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn care_mask(&self) -> u64 {
        self.care
    }

    pub fn value_mask(&self) -> u64 {
        self.value
    }

    /// `Some(bit)` for a fixed position, `None` for don't-care.
    pub fn bit(&self, pos: usize) -> Option<bool> {
        if self.care >> pos & 1 == 1 {
            Some(self.value >> pos & 1 == 1)
        } else {
            None
        }
    }

    pub fn cares(&self, pos: usize) -> bool {
        self.care >> pos & 1 == 1
    }

    pub fn matches(&self, sym: BitString) -> bool {
        sym.raw() & self.care == self.value
    }

    pub fn is_full(&self) -> bool {
        self.care == 0
    }

    /// Number of concrete symbols matched.
    pub fn count(&self) -> u128 {
        1u128 << (self.width() - self.care.count_ones() as usize)
    }

    pub fn intersect(&self, other: &Guard) -> Option<Guard> {
        debug_assert_eq!(self.width, other.width);
        if (self.value ^ other.value) & self.care & other.care != 0 {
            return None;
        }
        Some(Guard {
            care: self.care | other.care,
            value: self.value | other.value,
            width: self.width,
        })
    }

    pub fn overlaps(&self, other: &Guard) -> bool {
        (self.value ^ other.value) & self.care & other.care == 0
    }

    pub fn is_subset_of(&self, other: &Guard) -> bool {
        other.care & !self.care == 0 && (self.value ^ other.value) & other.care == 0
    }

    /// `self \ other` as a list of pairwise-disjoint cubes.
    pub fn subtract(&self, other: &Guard) -> Vec<Guard> {
        if !self.overlaps(other) {
            return vec![*self];
        }
        let mut out = Vec::new();
        let mut rest = *self;
        let free = other.care & !self.care;
        for pos in 0..self.width() {
            if free >> pos & 1 == 1 {
                let want = other.value >> pos & 1 == 1;
                out.push(rest.with(pos, !want));
                rest = rest.with(pos, want);
            }
        }
        out
    }

    /// The lexicographically least matching symbol (every `*` read as `0`).
    pub fn least_instance(&self) -> BitString {
        BitString::new(self.value, self.width())
    }

    /// Drops position `pos`; the result has width `width - 1`.
    pub fn erase(&self, pos: usize) -> Guard {
        Guard {
            care: erase_bit(self.care, pos),
            value: erase_bit(self.value, pos),
            width: self.width - 1,
        }
    }

    /// Inserts a don't-care at `pos`; the result has width `width + 1`.
    pub fn insert_dont_care(&self, pos: usize) -> Guard {
        assert!(self.width() < MAX_WIDTH);
        Guard {
            care: insert_bit(self.care, pos),
            value: insert_bit(self.value, pos),
            width: self.width + 1,
        }
    }

    /// Parses a pattern such as `0*1`. The single character `_` denotes the
    /// empty (width 0) guard.
    pub fn parse(text: &str) -> Option<Guard> {
        if text == "_" {
            return Some(Guard::full(0));
        }
        if text.is_empty() || text.len() > MAX_WIDTH {
            return None;
        }
        let mut g = Guard::full(text.len());
        for (i, c) in text.chars().enumerate() {
            g = match c {
                '0' => g.with(i, false),
                '1' => g.with(i, true),
                '*' => g,
                _ => return None,
            };
        }
        Some(g)
    }

    fn char_at(&self, pos: usize) -> u8 {
        match self.bit(pos) {
            None => b'*',
            Some(false) => b'0',
            Some(true) => b'1',
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return f.write_str("_");
        }
        for i in 0..self.width() {
            write!(f, "{}", self.char_at(i) as char)?;
        }
        Ok(())
    }
}

impl PartialOrd for Guard {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders guards by their textual pattern.
impl Ord for Guard {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            (0..self.width())
                .map(|i| self.char_at(i).cmp(&other.char_at(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// Cubes covering the symbols of `width` that none of `guards` matches.
pub fn uncovered<'a>(width: usize, guards: impl IntoIterator<Item = &'a Guard>) -> Vec<Guard> {
    let mut rest = vec![Guard::full(width)];
    for g in guards {
        if rest.is_empty() {
            break;
        }
        rest = rest.iter().flat_map(|r| r.subtract(g)).collect();
    }
    rest
}
