//! RSC constituent encoding, interleaving and the three-branch PCCC encoder.

use crate::error::{ensure_len, invalid};
use crate::rng::RngStream;
use crate::{BitBlock, Error, Result};

/// State-transition table of a recursive systematic convolutional encoder.
///
/// Polynomials are written MSB-first: the most significant of the
/// `memory + 1` bits is the coefficient applied to the current (feedback-summed)
/// input, the least significant taps the oldest register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    memory: usize,
    feedback: u32,
    feedforward: u32,
    next: Vec<[usize; 2]>,
    parity: Vec<[u8; 2]>,
}

impl Trellis {
    pub fn new(memory: usize, feedback: u32, feedforward: u32) -> Result<Self> {
        if memory == 0 || memory > 16 {
            return Err(invalid(format!("unsupported memory {memory}")));
        }
        let top = 1u32 << memory;
        if feedback & top == 0 || feedback >= top << 1 {
            return Err(invalid(format!("feedback polynomial {feedback:o} must have degree {memory}")));
        }
        if feedforward == 0 || feedforward >= top << 1 {
            return Err(invalid(format!("feedforward polynomial {feedforward:o} out of range")));
        }
        let states = 1usize << memory;
        let mut next = Vec::with_capacity(states);
        let mut parity = Vec::with_capacity(states);
        for s in 0..states {
            let mut nx = [0; 2];
            let mut px = [0; 2];
            for u in 0..2u32 {
                // register bits r_1..r_m live in s from MSB to LSB
                let taps = |poly: u32| ((poly & (top - 1)) & s as u32).count_ones() & 1;
                let a = u ^ taps(feedback);
                let p = (a & (feedforward >> memory)) ^ taps(feedforward);
                nx[u as usize] = ((a as usize) << (memory - 1)) | (s >> 1);
                px[u as usize] = p as u8;
            }
            next.push(nx);
            parity.push(px);
        }
        Ok(Self {
            memory,
            feedback,
            feedforward,
            next,
            parity,
        })
    }

    /// The 4-state code with feedback 7 and feedforward 5 (octal).
    pub fn rsc_7_5() -> Self {
        Self::new(2, 0o7, 0o5).expect("valid polynomials")
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn constraint_length(&self) -> usize {
        self.memory + 1
    }

    pub fn num_states(&self) -> usize {
        self.next.len()
    }

    pub fn feedback(&self) -> u32 {
        self.feedback
    }

    pub fn feedforward(&self) -> u32 {
        self.feedforward
    }

    #[inline]
    pub fn next_state(&self, state: usize, input: u8) -> usize {
        self.next[state][input as usize]
    }

    #[inline]
    pub fn parity(&self, state: usize, input: u8) -> u8 {
        self.parity[state][input as usize]
    }
}

/// Systematic and parity outputs of one constituent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RscOutput {
    pub systematic: BitBlock,
    pub parity: BitBlock,
    pub final_state: usize,
}

/// Encodes from the all-zero state without termination.
pub fn rsc_encode(bits: &[u8], trellis: &Trellis) -> Result<RscOutput> {
    if bits.is_empty() {
        return Err(Error::Empty);
    }
    let mut state = 0;
    let mut parity = Vec::with_capacity(bits.len());
    for &b in bits {
        let u = b & 1;
        parity.push(trellis.parity(state, u));
        state = trellis.next_state(state, u);
    }
    Ok(RscOutput {
        systematic: bits.iter().map(|b| b & 1).collect(),
        parity,
        final_state: state,
    })
}

/// A bijection on `[0, len)`; `interleave(x)[i] == x[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl Interleaver {
    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inverse[p] != usize::MAX {
                return Err(invalid("not a permutation"));
            }
            inverse[p] = i;
        }
        Ok(Self { perm, inverse })
    }

    /// Uniformly random permutation (Fisher–Yates) drawn from `rng`.
    pub fn random(len: usize, rng: &mut RngStream) -> Result<Self> {
        if len < 2 {
            return Err(invalid(format!("interleaver length {len} < 2")));
        }
        let mut perm: Vec<usize> = (0..len).collect();
        for i in (1..len).rev() {
            let j = rng.below(i + 1);
            perm.swap(i, j);
        }
        Self::from_permutation(perm)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn interleave<T: Copy>(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.len());
        self.perm.iter().map(|&p| x[p]).collect()
    }

    pub fn deinterleave<T: Copy>(&self, y: &[T]) -> Vec<T> {
        debug_assert_eq!(y.len(), self.len());
        self.inverse.iter().map(|&i| y[i]).collect()
    }
}

pub fn make_interleaver(len: usize, rng: &mut RngStream) -> Result<Interleaver> {
    Interleaver::random(len, rng)
}

/// Output of the rate-1/4 parallel concatenated encoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcccCodeword {
    pub systematic: BitBlock,
    pub parity1: BitBlock,
    pub parity2: BitBlock,
    pub parity3: BitBlock,
    /// `[sys_i, p1_i, p2_i, p3_i]` for each information bit `i`.
    pub multiplexed: BitBlock,
}

pub fn pccc_encode(
    bits: &[u8],
    trellis: &Trellis,
    il1: &Interleaver,
    il2: &Interleaver,
) -> Result<PcccCodeword> {
    ensure_len(bits.len(), il1.len())?;
    ensure_len(bits.len(), il2.len())?;
    let first = rsc_encode(bits, trellis)?;
    let second = rsc_encode(&il1.interleave(bits), trellis)?;
    let third = rsc_encode(&il2.interleave(bits), trellis)?;
    let multiplexed = (0..bits.len())
        .flat_map(|i| {
            [
                first.systematic[i],
                first.parity[i],
                second.parity[i],
                third.parity[i],
            ]
        })
        .collect();
    Ok(PcccCodeword {
        systematic: first.systematic,
        parity1: first.parity,
        parity2: second.parity,
        parity3: third.parity,
        multiplexed,
    })
}

/// Splits a multiplexed stream of any per-bit quantity back into its four lanes.
pub fn demultiplex<T: Copy>(stream: &[T]) -> Result<[Vec<T>; 4]> {
    if stream.len() % 4 != 0 {
        return Err(invalid(format!("stream length {} not a multiple of 4", stream.len())));
    }
    let lane = |k: usize| stream.iter().skip(k).step_by(4).copied().collect();
    Ok([lane(0), lane(1), lane(2), lane(3)])
}

/// A block code instance: constituent trellis and the two branch interleavers.
#[derive(Debug, Clone)]
pub struct TurboCode {
    pub trellis: Trellis,
    pub il1: Interleaver,
    pub il2: Interleaver,
}

impl TurboCode {
    /// Draws two distinct interleavers of `block_size` from `rng`.
    pub fn random(block_size: usize, rng: &mut RngStream) -> Result<Self> {
        let il1 = Interleaver::random(block_size, rng)?;
        let mut il2 = Interleaver::random(block_size, rng)?;
        while il2 == il1 {
            il2 = Interleaver::random(block_size, rng)?;
        }
        Ok(Self {
            trellis: Trellis::rsc_7_5(),
            il1,
            il2,
        })
    }

    pub fn block_size(&self) -> usize {
        self.il1.len()
    }

    pub fn encode(&self, bits: &[u8]) -> Result<PcccCodeword> {
        pccc_encode(bits, &self.trellis, &self.il1, &self.il2)
    }
}
