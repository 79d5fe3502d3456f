//! Text form of a Fiq: `0`/`1` determined bits, `?(p/q)` an undetermined bit
//! with propensity `p/q`, `?` shorthand for `?(1/2)`, and an optional trailing
//! `*` for the propensity-1/2 tail. Without `*` the expansion terminates.

use std::fmt;
use std::str::FromStr;

use super::{BitState, Fiq, FiqError, Propensity, Tail};
use crate::error::ParseError;
use crate::rational::parse_rational;

impl FromStr for Fiq {
    type Err = FiqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut determined = Vec::new();
        let mut propensities = Vec::new();
        let mut pos = 0u64;
        let mut i = 0usize;
        let mut tail = Tail::Terminated;
        while i < chars.len() {
            let column = i + 1;
            match chars[i] {
                '0' | '1' => {
                    pos += 1;
                    determined.push((pos, chars[i] == '1'));
                    i += 1;
                }
                '?' => {
                    pos += 1;
                    i += 1;
                    if chars.get(i) == Some(&'(') {
                        let close = chars[i..]
                            .iter()
                            .position(|&c| c == ')')
                            .map(|off| i + off)
                            .ok_or_else(|| ParseError::new(i + 1, "unclosed `(`"))?;
                        let body: String = chars[i + 1..close].iter().collect();
                        let value = parse_rational(&body)
                            .map_err(|e| ParseError::new(i + 1 + e.column, e.message))?;
                        let q = Propensity::new(value).map_err(|e| {
                            FiqError::Parse(ParseError::new(i + 2, e.to_string()))
                        })?;
                        propensities.push((pos, q));
                        i = close + 1;
                    }
                }
                '*' => {
                    if i + 1 != chars.len() {
                        return Err(ParseError::new(column, "`*` must be the last symbol").into());
                    }
                    tail = Tail::Half;
                    i += 1;
                }
                c => {
                    return Err(ParseError::new(column, format!("unexpected character `{c}`")).into())
                }
            }
        }
        let fiq = Fiq::new(&determined, &propensities)?;
        Ok(match tail {
            Tail::Half => fiq,
            Tail::Terminated => fiq.with_tail(Tail::Terminated, pos),
        })
    }
}

impl fmt::Display for Fiq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, state) in self.explicit_bits() {
            match state {
                BitState::Determined(true) => f.write_str("1")?,
                BitState::Determined(false) => f.write_str("0")?,
                BitState::Undetermined(q) if q.is_half() => f.write_str("?")?,
                BitState::Undetermined(q) => write!(f, "?({q})")?,
            }
        }
        if self.tail == Tail::Half {
            f.write_str("*")?;
        }
        Ok(())
    }
}
