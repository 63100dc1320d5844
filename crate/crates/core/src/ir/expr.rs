use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An XOR-affine boolean over measurement records `r_i` and offset bits `d_k`.
///
/// Evaluates to `constant ^ (xor of records) ^ (xor of offset bits)`. Terms are
/// kept as sets, so xoring a term in twice cancels it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassicalExpr {
    constant: bool,
    records: BTreeSet<u32>,
    offsets: BTreeSet<u32>,
}

impl ClassicalExpr {
    pub fn constant(value: bool) -> Self {
        Self {
            constant: value,
            ..Self::default()
        }
    }

    pub fn zero() -> Self {
        Self::constant(false)
    }

    pub fn one() -> Self {
        Self::constant(true)
    }

    pub fn record(index: u32) -> Self {
        Self::zero().xor_record(index)
    }

    pub fn offset_bit(k: u32) -> Self {
        Self::zero().xor_offset(k)
    }

    pub fn constant_part(&self) -> bool {
        self.constant
    }

    pub fn records(&self) -> &BTreeSet<u32> {
        &self.records
    }

    pub fn offsets(&self) -> &BTreeSet<u32> {
        &self.offsets
    }

    pub fn is_constant(&self) -> bool {
        self.records.is_empty() && self.offsets.is_empty()
    }

    /// `Some(value)` when the expression has no free terms.
    pub fn as_constant(&self) -> Option<bool> {
        self.is_constant().then_some(self.constant)
    }

    pub fn has_offsets(&self) -> bool {
        !self.offsets.is_empty()
    }

    pub fn negate(mut self) -> Self {
        self.constant = !self.constant;
        self
    }

    pub fn xor_constant(mut self, value: bool) -> Self {
        self.constant ^= value;
        self
    }

    pub fn xor_record(mut self, index: u32) -> Self {
        toggle(&mut self.records, index);
        self
    }

    pub fn xor_offset(mut self, k: u32) -> Self {
        toggle(&mut self.offsets, k);
        self
    }

    pub fn xor(mut self, other: &Self) -> Self {
        self.constant ^= other.constant;
        for &r in &other.records {
            toggle(&mut self.records, r);
        }
        for &k in &other.offsets {
            toggle(&mut self.offsets, k);
        }
        self
    }

    /// Resolve every `d_k` against `bits`, folding them into the constant.
    pub fn bind_offsets(&self, bits: impl Fn(u32) -> bool) -> Self {
        let parity = self.offsets.iter().fold(false, |acc, &k| acc ^ bits(k));
        Self {
            constant: self.constant ^ parity,
            records: self.records.clone(),
            offsets: BTreeSet::new(),
        }
    }

    /// Evaluate against concrete record values and (optionally) offset bits.
    pub fn eval(&self, records: &[bool], offset: Option<&dyn Fn(u32) -> bool>) -> Result<bool> {
        let mut v = self.constant;
        for &r in &self.records {
            v ^= *records
                .get(r as usize)
                .ok_or_else(|| Error::Parse(format!("record r{r} evaluated before it was produced")))?;
        }
        if !self.offsets.is_empty() {
            let bits = offset.ok_or(Error::UnresolvedOffset)?;
            for &k in &self.offsets {
                v ^= bits(k);
            }
        }
        Ok(v)
    }

    /// True when the expression is a single term or a bare constant.
    pub fn is_atomic(&self) -> bool {
        let terms = self.records.len() + self.offsets.len();
        terms == 0 || (terms == 1 && !self.constant)
    }
}

fn toggle(set: &mut BTreeSet<u32>, v: u32) {
    if !set.remove(&v) {
        set.insert(v);
    }
}

impl fmt::Display for ClassicalExpr {
    /// Renders as `1^r3^d5`: constant first (omitted when zero and other terms
    /// exist), then records, then offset bits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.constant || self.is_constant() {
            parts.push(if self.constant { "1" } else { "0" }.into());
        }
        parts.extend(self.records.iter().map(|r| format!("r{r}")));
        parts.extend(self.offsets.iter().map(|k| format!("d{k}")));
        f.write_str(&parts.join("^"))
    }
}

impl FromStr for ClassicalExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut e = Self::zero();
        for tok in s.split('^') {
            let tok = tok.trim();
            let parse_index = |digits: &str| {
                digits
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad term {tok:?} in {s:?}")))
            };
            e = match tok {
                "0" => e,
                "1" => e.negate(),
                t if t.starts_with('r') => e.xor_record(parse_index(&t[1..])?),
                t if t.starts_with('d') => e.xor_offset(parse_index(&t[1..])?),
                _ => return Err(Error::Parse(format!("bad term {tok:?} in {s:?}"))),
            };
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        let e = ClassicalExpr::one().xor_record(3).xor_offset(5);
        assert_eq!(e.to_string(), "1^r3^d5");
        assert_eq!("1^r3^d5".parse::<ClassicalExpr>().unwrap(), e);
        assert_eq!(ClassicalExpr::zero().to_string(), "0");
        assert_eq!(ClassicalExpr::offset_bit(2).to_string(), "d2");
        assert_eq!("d2^d2".parse::<ClassicalExpr>().unwrap(), ClassicalExpr::zero());
        assert!("x4".parse::<ClassicalExpr>().is_err());
        assert!("".parse::<ClassicalExpr>().is_err());
        assert!("r".parse::<ClassicalExpr>().is_err());
    }

    #[test]
    fn eval_needs_offset_for_d_terms() {
        let e = ClassicalExpr::offset_bit(0);
        assert_eq!(e.eval(&[], None), Err(Error::UnresolvedOffset));
        let bits = |k: u32| k == 0;
        assert_eq!(e.eval(&[], Some(&bits)), Ok(true));
    }

    fn arb_expr() -> impl Strategy<Value = ClassicalExpr> {
        (
            any::<bool>(),
            prop::collection::vec(0u32..6, 0..5),
            prop::collection::vec(0u32..6, 0..5),
        )
            .prop_map(|(c, rs, ds)| {
                let mut e = ClassicalExpr::constant(c);
                for r in rs {
                    e = e.xor_record(r);
                }
                for d in ds {
                    e = e.xor_offset(d);
                }
                e
            })
    }

    proptest! {
        #[test]
        fn xor_is_pointwise(a in arb_expr(), b in arb_expr(), recs in prop::collection::vec(any::<bool>(), 6), d in 0u64..64) {
            let bits = move |k: u32| (d >> k) & 1 == 1;
            let lhs = a.clone().xor(&b).eval(&recs, Some(&bits)).unwrap();
            let rhs = a.eval(&recs, Some(&bits)).unwrap() ^ b.eval(&recs, Some(&bits)).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.clone().xor(&a), ClassicalExpr::zero());
        }

        #[test]
        fn text_round_trip(a in arb_expr()) {
            prop_assert_eq!(a.to_string().parse::<ClassicalExpr>().unwrap(), a);
        }

        #[test]
        fn binding_preserves_value(a in arb_expr(), recs in prop::collection::vec(any::<bool>(), 6), d in 0u64..64) {
            let bits = move |k: u32| (d >> k) & 1 == 1;
            let bound = a.bind_offsets(bits);
            prop_assert!(!bound.has_offsets());
            prop_assert_eq!(bound.eval(&recs, None).unwrap(), a.eval(&recs, Some(&bits)).unwrap());
        }
    }
}
