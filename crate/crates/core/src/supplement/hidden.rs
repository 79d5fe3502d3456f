use super::tape::BitTape;
use super::SupplementError;
use crate::dyadic::Dyadic;

/// Number of successive splits a tape-backed variable supports. Split `s`
/// reads every `2^s`-th tape digit, and positions are addressed in 128 bits.
pub const MAX_SPLITS: u32 = 100;

#[derive(Clone, Debug)]
enum Source {
    /// Bits beyond the prefix are zero: `r` is a terminating dyadic.
    Zeros,
    /// Bit `k` of the variable is tape digit `(k - 1) * 2^stride + first`.
    Tape {
        tape: Box<BitTape>,
        stride: u32,
        first: u128,
    },
}

/// A hidden variable `r` in `[0, 1)` given by its binary digits
/// `r = sum b_k 2^-k`. Digits are materialized in order on demand and never
/// change once read.
#[derive(Clone, Debug)]
pub struct HiddenVar {
    prefix: Vec<bool>,
    source: Source,
}

impl HiddenVar {
    /// Uniformly distributed `r` whose digits are the tape's digits.
    pub fn from_tape(tape: BitTape) -> Self {
        HiddenVar {
            prefix: Vec::new(),
            source: Source::Tape {
                tape: Box::new(tape),
                stride: 0,
                first: 1,
            },
        }
    }

    pub fn uniform(seed: u64) -> Self {
        Self::from_tape(BitTape::new(seed))
    }

    /// The terminating dyadic `0.b1 b2 ... bn`; later digits are zero.
    pub fn from_bits(bits: &[bool]) -> Self {
        HiddenVar {
            prefix: bits.to_vec(),
            source: Source::Zeros,
        }
    }

    /// Digits materialized so far.
    pub fn materialized(&self) -> &[bool] {
        &self.prefix
    }

    /// True when every digit past the materialized prefix is known to be zero.
    pub fn is_terminating(&self) -> bool {
        matches!(self.source, Source::Zeros)
    }

    /// Digit `k` (1-based), materializing the prefix up to `k`.
    pub fn bit(&mut self, k: u64) -> Result<bool, SupplementError> {
        assert!(k >= 1, "digit positions are 1-based");
        while (self.prefix.len() as u64) < k {
            let next = self.prefix.len() as u64 + 1;
            let b = self.source_bit(next)?;
            self.prefix.push(b);
        }
        Ok(self.prefix[k as usize - 1])
    }

    fn source_bit(&mut self, k: u64) -> Result<bool, SupplementError> {
        match &mut self.source {
            Source::Zeros => Ok(false),
            Source::Tape {
                tape,
                stride,
                first,
            } => {
                let pos = ((k - 1) as u128)
                    .checked_mul(1u128 << *stride)
                    .and_then(|p| p.checked_add(*first))
                    .ok_or(SupplementError::Exhausted)?;
                Ok(tape.bit(pos))
            }
        }
    }

    /// Exact value of the first `n` digits.
    pub fn prefix_value(&mut self, n: u64) -> Result<Dyadic, SupplementError> {
        if n > 0 {
            self.bit(n)?;
        }
        Ok(Dyadic::from_bits(&self.prefix[..n as usize]))
    }

    /// Odd- and even-position parts, sharing this variable's materialized
    /// digits and lazy source.
    pub(crate) fn split(self) -> Result<(HiddenVar, HiddenVar), SupplementError> {
        let odd: Vec<bool> = self.prefix.iter().step_by(2).copied().collect();
        let even: Vec<bool> = self.prefix.iter().skip(1).step_by(2).copied().collect();
        let (s1, s2) = match self.source {
            Source::Zeros => (Source::Zeros, Source::Zeros),
            Source::Tape {
                tape,
                stride,
                first,
            } => {
                if stride >= MAX_SPLITS {
                    return Err(SupplementError::Exhausted);
                }
                let second = first
                    .checked_add(1u128 << stride)
                    .ok_or(SupplementError::Exhausted)?;
                (
                    Source::Tape {
                        tape: tape.clone(),
                        stride: stride + 1,
                        first,
                    },
                    Source::Tape {
                        tape,
                        stride: stride + 1,
                        first: second,
                    },
                )
            }
        };
        Ok((
            HiddenVar {
                prefix: odd,
                source: s1,
            },
            HiddenVar {
                prefix: even,
                source: s2,
            },
        ))
    }
}

/// Splits `r` into `r1` (digits at odd positions) and `r2` (digits at even
/// positions), materializing the first `depth` digits of `r`. Both halves
/// keep extending lazily from `r`'s tape.
pub fn split_bits(mut r: HiddenVar, depth: u64) -> Result<(HiddenVar, HiddenVar), SupplementError> {
    if depth < 2 || !depth.is_multiple_of(2) {
        return Err(SupplementError::InvalidDepth(depth));
    }
    r.bit(depth)?;
    r.split()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn read(r: &mut HiddenVar, n: u64) -> Vec<bool> {
        (1..=n).map(|k| r.bit(k).unwrap()).collect()
    }

    #[test]
    fn interleave_read_off() {
        let (mut r1, mut r2) = split_bits(HiddenVar::from_bits(&bits("1100")), 4).unwrap();
        assert_eq!(read(&mut r1, 2), bits("10"));
        assert_eq!(read(&mut r2, 2), bits("10"));
    }

    #[test]
    fn alternating_digits() {
        let r = HiddenVar::from_bits(&bits(&"10".repeat(32)));
        let (mut r1, mut r2) = split_bits(r, 64).unwrap();
        assert_eq!(read(&mut r1, 32), vec![true; 32]);
        assert_eq!(read(&mut r2, 32), vec![false; 32]);
    }

    #[test]
    fn depth_must_be_even() {
        for d in [0, 1, 3, 7] {
            assert_eq!(
                split_bits(HiddenVar::uniform(1), d).unwrap_err(),
                SupplementError::InvalidDepth(d)
            );
        }
    }

    #[test]
    fn tape_split_matches_direct_interleave() {
        let mut r = HiddenVar::uniform(5);
        let whole = read(&mut r, 400);
        let (mut r1, mut r2) = split_bits(HiddenVar::uniform(5), 10).unwrap();
        let a = read(&mut r1, 200);
        let b = read(&mut r2, 200);
        for k in 0..200 {
            assert_eq!(a[k], whole[2 * k]);
            assert_eq!(b[k], whole[2 * k + 1]);
        }
        // A second split of r2 reads digits 2, 6, 10, ... and 4, 8, 12, ...
        let (mut r21, mut r22) = r2.split().unwrap();
        let c = read(&mut r21, 100);
        let d = read(&mut r22, 100);
        for k in 0..100 {
            assert_eq!(c[k], whole[4 * k + 1]);
            assert_eq!(d[k], whole[4 * k + 3]);
        }
    }

    #[test]
    fn materialized_prefix_is_kept() {
        let mut r = HiddenVar::uniform(8);
        let v = read(&mut r, 20);
        let (r1, r2) = r.split().unwrap();
        assert_eq!(r1.materialized().len(), 10);
        assert_eq!(r2.materialized().len(), 10);
        assert_eq!(r1.materialized()[3], v[6]);
    }

    #[test]
    fn split_limit_is_an_error() {
        let mut r = HiddenVar::uniform(2);
        for _ in 0..MAX_SPLITS {
            r = r.split().unwrap().1;
        }
        assert_eq!(r.split().unwrap_err(), SupplementError::Exhausted);
    }
}
