//! Fixed-length bit buffer backing [`crate::WindowedSet`] and the gap-sum DP.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitBuf {
    len: usize,
    words: Vec<u64>,
}

impl BitBuf {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self {
            len,
            words: vec![u64::MAX; len.div_ceil(WORD)],
        };
        b.trim();
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    /// Population count of the bit range `[from, to)`.
    pub fn count_range(&self, from: usize, to: usize) -> usize {
        let to = to.min(self.len);
        if from >= to {
            return 0;
        }
        let (fw, tw) = (from / WORD, (to - 1) / WORD);
        let lo_mask = u64::MAX << (from % WORD);
        let hi_mask = u64::MAX >> (WORD - 1 - (to - 1) % WORD);
        if fw == tw {
            return (self.words[fw] & lo_mask & hi_mask).count_ones() as usize;
        }
        let mut c = (self.words[fw] & lo_mask).count_ones() as usize;
        for w in &self.words[fw + 1..tw] {
            c += w.count_ones() as usize;
        }
        c + (self.words[tw] & hi_mask).count_ones() as usize
    }

    /// Smallest set index `>= from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / WORD;
        let mut w = self.words[wi] & (u64::MAX << (from % WORD));
        loop {
            if w != 0 {
                let i = wi * WORD + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    /// Largest set index `< before`.
    pub fn prev_one(&self, before: usize) -> Option<usize> {
        let before = before.min(self.len);
        if before == 0 {
            return None;
        }
        let last = before - 1;
        let mut wi = last / WORD;
        let mut w = self.words[wi] & (u64::MAX >> (WORD - 1 - last % WORD));
        loop {
            if w != 0 {
                return Some(wi * WORD + (WORD - 1 - w.leading_zeros() as usize));
            }
            if wi == 0 {
                return None;
            }
            wi -= 1;
            w = self.words[wi];
        }
    }

    pub fn ones(&self) -> Ones<'_> {
        Ones { buf: self, next: 0 }
    }

    pub fn or_assign(&mut self, other: &BitBuf) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitBuf) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// `self |= src` moved by `offset` positions: bit `i` of `src` lands on
    /// bit `i + offset` of `self`. Bits falling outside `[0, len)` are dropped.
    /// `src` may have a different length.
    pub fn or_shifted(&mut self, src: &BitBuf, offset: i64) {
        // word k of the result reads source bits starting at k*64 - offset
        for (k, word) in self.words.iter_mut().enumerate() {
            *word |= src.word_at((k * WORD) as i64 - offset);
        }
        self.trim();
    }

    /// 64 source bits beginning at (possibly negative) bit position `start`.
    fn word_at(&self, start: i64) -> u64 {
        let len = self.len as i64;
        if start >= len || start + WORD as i64 <= 0 {
            return 0;
        }
        // bits past len are kept zero by trim(), so aligned reads need no mask
        let read = |pos: i64| self.words.get((pos / WORD as i64) as usize).copied().unwrap_or(0);
        if start >= 0 {
            let bit = (start % WORD as i64) as u32;
            let lo = read(start) >> bit;
            let hi = if bit == 0 { 0 } else { read(start + WORD as i64) << (WORD as u32 - bit) };
            lo | hi
        } else {
            read(0) << ((-start) as u32)
        }
    }

    fn trim(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl std::fmt::Debug for BitBuf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

pub(crate) struct Ones<'a> {
    buf: &'a BitBuf,
    next: usize,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let i = self.buf.next_one(self.next)?;
        self.next = i + 1;
        Some(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_shift(src: &BitBuf, len: usize, offset: i64) -> Vec<usize> {
        src.ones()
            .map(|i| i as i64 + offset)
            .filter(|&j| j >= 0 && (j as usize) < len)
            .map(|j| j as usize)
            .collect()
    }

    #[test]
    fn shifted_or_matches_naive() {
        let mut src = BitBuf::new(200);
        for i in [0, 1, 5, 63, 64, 65, 127, 128, 150, 199] {
            src.set(i);
        }
        for len in [1, 63, 64, 65, 130, 300] {
            for offset in [-250, -199, -64, -63, -1, 0, 1, 7, 63, 64, 65, 129, 299] {
                let mut dst = BitBuf::new(len);
                dst.or_shifted(&src, offset);
                assert_eq!(
                    dst.ones().collect::<Vec<_>>(),
                    naive_shift(&src, len, offset),
                    "len {len} offset {offset}"
                );
            }
        }
    }

    #[test]
    fn range_counts_and_neighbours() {
        let mut b = BitBuf::new(300);
        for i in [3, 64, 65, 200, 299] {
            b.set(i);
        }
        assert_eq!(b.count_range(0, 300), 5);
        assert_eq!(b.count_range(4, 200), 2);
        assert_eq!(b.count_range(64, 65), 1);
        assert_eq!(b.count_range(10, 10), 0);
        assert_eq!(b.next_one(4), Some(64));
        assert_eq!(b.next_one(201), Some(299));
        assert_eq!(b.prev_one(64), Some(3));
        assert_eq!(b.prev_one(3), None);
        assert_eq!(b.prev_one(1000), Some(299));
    }

    #[test]
    fn full_is_trimmed() {
        let b = BitBuf::full(70);
        assert_eq!(b.count_ones(), 70);
        assert!(!b.get(70));
    }
}
