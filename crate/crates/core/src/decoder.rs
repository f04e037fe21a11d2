//! Log-MAP constituent decoding and the three-decoder turbo loop.
//!
//! LLRs use natural-log units with positive values favouring bit 1.

use crate::encoder::{Interleaver, Trellis};
use crate::error::{ensure_len, invalid};
use crate::{BitBlock, Error, Result, Scalar};

/// Magnitude at which LLRs are saturated before entering the recursions.
pub const LLR_CLAMP: f64 = 50.0;

/// Exact log-sum-exp of two terms: `max(x, y) + ln(1 + e^{-|x - y|})`.
#[inline]
pub fn max_star<T: Scalar>(x: T, y: T) -> T {
    if x == T::neg_infinity() {
        return y;
    }
    if y == T::neg_infinity() {
        return x;
    }
    x.max(y) + (-(x - y).abs()).exp().ln_1p()
}

#[inline]
fn clamp<T: Scalar>(v: T) -> T {
    let c = T::of(LLR_CLAMP);
    v.max(-c).min(c)
}

/// Posterior and extrinsic LLRs of one constituent decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct AppOutput<T> {
    pub posterior: Vec<T>,
    pub extrinsic: Vec<T>,
}

/// BCJR forward-backward pass over an unterminated trellis.
///
/// The forward metric starts in the all-zero state; the backward metric starts
/// uniform. Inputs are saturated at ±[`LLR_CLAMP`], and
/// `extrinsic = posterior - sys - apriori` uses the saturated inputs.
pub fn app_decode<T: Scalar>(
    sys: &[T],
    parity: &[T],
    apriori: &[T],
    trellis: &Trellis,
) -> Result<AppOutput<T>> {
    let n = sys.len();
    ensure_len(n, parity.len())?;
    ensure_len(n, apriori.len())?;
    if n == 0 {
        return Err(Error::Empty);
    }
    let states = trellis.num_states();
    let ninf = T::neg_infinity();

    let ls: Vec<T> = sys.iter().map(|&v| clamp(v)).collect();
    let lp: Vec<T> = parity.iter().map(|&v| clamp(v)).collect();
    let la: Vec<T> = apriori.iter().map(|&v| clamp(v)).collect();

    // branch metric for input u and parity bit p at step k
    let gamma = |k: usize, u: u8, p: u8| -> T {
        let mut g = T::zero();
        if u == 1 {
            g += ls[k] + la[k];
        }
        if p == 1 {
            g += lp[k];
        }
        g
    };

    let mut alpha = vec![ninf; (n + 1) * states];
    alpha[0] = T::zero();
    for k in 0..n {
        let (cur, next) = alpha[k * states..(k + 2) * states].split_at_mut(states);
        for s in 0..states {
            let a = cur[s];
            if a == ninf {
                continue;
            }
            for u in 0..2u8 {
                let t = trellis.next_state(s, u);
                next[t] = max_star(next[t], a + gamma(k, u, trellis.parity(s, u)));
            }
        }
        let m = next.iter().copied().fold(ninf, T::max);
        for v in next.iter_mut() {
            *v -= m;
        }
    }

    let mut beta = vec![T::zero(); (n + 1) * states];
    for k in (0..n).rev() {
        let (cur, next) = beta[k * states..(k + 2) * states].split_at_mut(states);
        let mut m = ninf;
        for s in 0..states {
            let mut acc = ninf;
            for u in 0..2u8 {
                let t = trellis.next_state(s, u);
                acc = max_star(acc, next[t] + gamma(k, u, trellis.parity(s, u)));
            }
            cur[s] = acc;
            m = m.max(acc);
        }
        for v in cur.iter_mut() {
            *v -= m;
        }
    }

    let mut posterior = Vec::with_capacity(n);
    let mut extrinsic = Vec::with_capacity(n);
    for k in 0..n {
        let mut num = [ninf, ninf];
        for s in 0..states {
            let a = alpha[k * states + s];
            if a == ninf {
                continue;
            }
            for u in 0..2u8 {
                let t = trellis.next_state(s, u);
                let m = a + gamma(k, u, trellis.parity(s, u)) + beta[(k + 1) * states + t];
                num[u as usize] = max_star(num[u as usize], m);
            }
        }
        let post = num[1] - num[0];
        posterior.push(post);
        extrinsic.push(post - ls[k] - la[k]);
    }
    Ok(AppOutput {
        posterior,
        extrinsic,
    })
}

/// Channel LLRs and interleavers for one turbo block.
#[derive(Debug, Clone)]
pub struct DecoderInput<'a, T> {
    pub systematic: Vec<T>,
    pub parity: [Vec<T>; 3],
    pub il1: &'a Interleaver,
    pub il2: &'a Interleaver,
}

impl<'a, T: Scalar> DecoderInput<'a, T> {
    /// Builds the input from a multiplexed `[sys, p1, p2, p3]` LLR stream.
    pub fn from_multiplexed(
        llrs: &[T],
        il1: &'a Interleaver,
        il2: &'a Interleaver,
    ) -> Result<Self> {
        let [systematic, p1, p2, p3] = crate::encoder::demultiplex(llrs)?;
        let input = Self {
            systematic,
            parity: [p1, p2, p3],
            il1,
            il2,
        };
        input.validate()?;
        Ok(input)
    }

    fn validate(&self) -> Result<()> {
        let n = self.systematic.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for p in &self.parity {
            ensure_len(n, p.len())?;
        }
        ensure_len(n, self.il1.len())?;
        ensure_len(n, self.il2.len())
    }
}

fn hard_decision<T: Scalar>(llrs: &[T]) -> BitBlock {
    llrs.iter().map(|&l| u8::from(l > T::zero())).collect()
}

/// Wiring of the three constituent decoders within an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// DEC1 → DEC2 → DEC3 → DEC1: each decoder's a-priori is the extrinsic of
    /// the decoder before it, and the decision is taken on DEC3's posterior.
    #[default]
    Ring,
    /// Each decoder's a-priori is the sum of the latest extrinsics of the
    /// other two; the decision uses the systematic input plus all three.
    Shared,
}

impl std::str::FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ring" => Ok(Schedule::Ring),
            "shared" => Ok(Schedule::Shared),
            other => Err(invalid(format!("unknown decoder schedule '{other}'"))),
        }
    }
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Schedule::Ring => "ring",
            Schedule::Shared => "shared",
        })
    }
}

/// Iterative decoding with the ring schedule, returning the hard decisions
/// after each iteration (natural order). Entry `i` equals what a run with
/// `i + 1` iterations would output.
pub fn turbo_decode_trace<T: Scalar>(
    input: &DecoderInput<'_, T>,
    iterations: usize,
    trellis: &Trellis,
) -> Result<Vec<BitBlock>> {
    turbo_decode_trace_with(input, iterations, trellis, Schedule::Ring)
}

pub fn turbo_decode_trace_with<T: Scalar>(
    input: &DecoderInput<'_, T>,
    iterations: usize,
    trellis: &Trellis,
    schedule: Schedule,
) -> Result<Vec<BitBlock>> {
    if iterations == 0 {
        return Err(invalid("iterations must be >= 1"));
    }
    input.validate()?;
    let (il1, il2) = (input.il1, input.il2);
    let n = input.systematic.len();
    let sys1 = &input.systematic;
    let sys2 = il1.interleave(sys1);
    let sys3 = il2.interleave(sys1);
    let mut decisions = Vec::with_capacity(iterations);

    match schedule {
        Schedule::Ring => {
            let mut feedback = vec![T::zero(); n];
            for _ in 0..iterations {
                let dec1 = app_decode(sys1, &input.parity[0], &feedback, trellis)?;
                let apriori2 = il1.interleave(&dec1.extrinsic);
                let dec2 = app_decode(&sys2, &input.parity[1], &apriori2, trellis)?;
                let apriori3 = il2.interleave(&il1.deinterleave(&dec2.extrinsic));
                let dec3 = app_decode(&sys3, &input.parity[2], &apriori3, trellis)?;
                feedback = il2.deinterleave(&dec3.extrinsic);
                decisions.push(hard_decision(&il2.deinterleave(&dec3.posterior)));
            }
        }
        Schedule::Shared => {
            // extrinsics kept in natural order
            let mut e = [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]];
            let sum = |a: &[T], b: &[T]| -> Vec<T> { a.iter().zip(b).map(|(&x, &y)| x + y).collect() };
            for _ in 0..iterations {
                let a1 = sum(&e[1], &e[2]);
                e[0] = app_decode(sys1, &input.parity[0], &a1, trellis)?.extrinsic;
                let a2 = il1.interleave(&sum(&e[0], &e[2]));
                e[1] = il1.deinterleave(&app_decode(&sys2, &input.parity[1], &a2, trellis)?.extrinsic);
                let a3 = il2.interleave(&sum(&e[0], &e[1]));
                e[2] = il2.deinterleave(&app_decode(&sys3, &input.parity[2], &a3, trellis)?.extrinsic);
                let total: Vec<T> = (0..n).map(|i| sys1[i] + e[0][i] + e[1][i] + e[2][i]).collect();
                decisions.push(hard_decision(&total));
            }
        }
    }
    Ok(decisions)
}

/// Decodes one block and returns the hard decisions after `iterations`.
pub fn turbo_decode<T: Scalar>(
    input: &DecoderInput<'_, T>,
    iterations: usize,
    trellis: &Trellis,
) -> Result<BitBlock> {
    let mut trace = turbo_decode_trace(input, iterations, trellis)?;
    Ok(trace.pop().expect("at least one iteration"))
}

/// Scales unit-amplitude bipolar samples by the channel reliability `2 / σ²`.
pub fn scale_received<T: Scalar>(bipolar: &[T], noise_variance: T) -> Result<Vec<T>> {
    if !(noise_variance > T::zero()) || !noise_variance.is_finite() {
        return Err(invalid(format!("noise variance {noise_variance} must be positive")));
    }
    let gain = T::of(2.0) / noise_variance;
    Ok(bipolar.iter().map(|&v| v * gain).collect())
}
