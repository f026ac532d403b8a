//! Counter-based, splittable random numbers (Philox4x32-10).
//!
//! Output is a pure function of `(seed, stream, index)`: the 64-bit seed is the
//! Philox key, the 128-bit counter is `[index_lo, index_hi, stream_lo, stream_hi]`.
//! Streams never share counters, so giving each feature its own stream means
//! adding a feature cannot shift the draws of the features before it. Only
//! 32-bit integer arithmetic is involved, so the raw words are identical on
//! every platform.

const MUL0: u32 = 0xD251_1F53;
const MUL1: u32 = 0xCD9E_8D57;
const WEYL0: u32 = 0x9E37_79B9;
const WEYL1: u32 = 0xBB67_AE85;
const ROUNDS: usize = 10;

#[inline]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

#[inline]
fn round(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let (hi0, lo0) = mulhilo(MUL0, ctr[0]);
    let (hi1, lo1) = mulhilo(MUL1, ctr[2]);
    [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0]
}

/// The raw Philox4x32-10 bijection.
pub fn philox4x32(mut ctr: [u32; 4], mut key: [u32; 2]) -> [u32; 4] {
    for r in 0..ROUNDS {
        if r > 0 {
            key[0] = key[0].wrapping_add(WEYL0);
            key[1] = key[1].wrapping_add(WEYL1);
        }
        ctr = round(ctr, key);
    }
    ctr
}

/// A keyed generator. Cheap to copy; holds no position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Philox {
    key: [u32; 2],
}

impl Philox {
    pub fn new(seed: u64) -> Self {
        Self {
            key: [seed as u32, (seed >> 32) as u32],
        }
    }

    pub fn block(&self, stream: u64, index: u64) -> [u32; 4] {
        philox4x32(
            [index as u32, (index >> 32) as u32, stream as u32, (stream >> 32) as u32],
            self.key,
        )
    }

    /// An independent sequential reader over one stream.
    pub fn stream(&self, stream: u64) -> Stream {
        Stream {
            gen: *self,
            stream,
            index: 0,
            buf: [0; 4],
            pos: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stream {
    gen: Philox,
    stream: u64,
    index: u64,
    buf: [u32; 4],
    pos: usize,
}

impl Stream {
    pub fn next_u32(&mut self) -> u32 {
        if self.pos == 4 {
            self.buf = self.gen.block(self.stream, self.index);
            self.index = self.index.wrapping_add(1);
            self.pos = 0;
        }
        let v = self.buf[self.pos];
        self.pos += 1;
        v
    }

    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.next_u32());
        let hi = u64::from(self.next_u32());
        (hi << 32) | lo
    }

    /// Uniform on the open interval (0, 1), 53 bits of resolution.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        2.0 * ((self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)) - 1.0
    }
}
