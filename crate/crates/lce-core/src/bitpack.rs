//! Fixed-width bit-packed integer vectors.
//!
//! The difference-cover structure stores rank and LCP arrays at the minimal
//! width needed for their value range, which is what keeps its persistent
//! footprint within a small constant times n/tau words.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVec {
    words: Vec<u64>,
    width: u32,
    len: usize,
}

/// Bits needed to represent `max` (at least 1).
pub fn width_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

impl IntVec {
    pub fn from_slice(values: &[u64], width: u32) -> Self {
        assert!(width >= 1 && width <= 64);
        let bits = values.len() * width as usize;
        let mut v = IntVec {
            words: vec![0u64; bits.div_ceil(64)],
            width,
            len: values.len(),
        };
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn from_raw(words: Vec<u64>, width: u32, len: usize) -> Self {
        assert!(width >= 1 && width <= 64);
        assert!(words.len() == (len * width as usize).div_ceil(64));
        IntVec { words, width, len }
    }

    /// Persistent size in 64-bit words.
    pub fn stored_words(&self) -> usize {
        self.words.len()
    }

    fn set(&mut self, i: usize, x: u64) {
        let w = self.width as usize;
        debug_assert!(w == 64 || x < (1u64 << w));
        let bit = i * w;
        let (wi, off) = (bit / 64, bit % 64);
        self.words[wi] |= x << off;
        if off + w > 64 {
            self.words[wi + 1] |= x >> (64 - off);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let w = self.width as usize;
        let bit = i * w;
        let (wi, off) = (bit / 64, bit % 64);
        let mut x = self.words[wi] >> off;
        if off + w > 64 {
            x |= self.words[wi + 1] << (64 - off);
        }
        if w == 64 {
            x
        } else {
            x & ((1u64 << w) - 1)
        }
    }
}
