//! Word-level helpers for fixed-width bit rows.

pub(crate) const WORD: usize = 64;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
pub(crate) fn get(row: &[u64], i: usize) -> bool {
    row[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize) {
    row[i / WORD] |= 1 << (i % WORD);
}

#[inline]
pub(crate) fn clear(row: &mut [u64], i: usize) {
    row[i / WORD] &= !(1 << (i % WORD));
}

/// Up to 64 bits starting at `pos`, not wrapping; bits past `n` read as zero.
#[inline]
fn read(row: &[u64], pos: usize, len: usize, n: usize) -> u64 {
    if len == 0 || pos >= n {
        return 0;
    }
    let (w, off) = (pos / WORD, pos % WORD);
    let mut v = row[w] >> off;
    if off != 0 && w + 1 < row.len() {
        v |= row[w + 1] << (WORD - off);
    }
    let avail = (n - pos).min(len);
    if avail < WORD {
        v &= (1u64 << avail) - 1;
    }
    v
}

/// `dst[y] = src[(y + d) mod n]`.
pub(crate) fn rotate_into(src: &[u64], d: usize, n: usize, dst: &mut [u64]) {
    for (w, out) in dst.iter_mut().enumerate() {
        let start = w * WORD;
        if start >= n {
            *out = 0;
            continue;
        }
        let len = WORD.min(n - start);
        let pos = (start + d) % n;
        let first = len.min(n - pos);
        let mut v = read(src, pos, first, n);
        if first < len {
            v |= read(src, 0, len - first, n) << first;
        }
        *out = v;
    }
}

/// `dst[y] = src[y + s]` when `0 <= y + s < n`, else 0.
pub(crate) fn shift_into(src: &[u64], s: i64, n: usize, dst: &mut [u64]) {
    for (w, out) in dst.iter_mut().enumerate() {
        let start = (w * WORD) as i64;
        if start >= n as i64 {
            *out = 0;
            continue;
        }
        let len = WORD.min(n - w * WORD) as i64;
        let lo = start + s;
        let v = if lo >= 0 {
            read(src, lo as usize, len as usize, n)
        } else if lo + len > 0 {
            read(src, 0, (lo + len) as usize, n) << (-lo) as u32
        } else {
            0
        };
        *out = v;
    }
}

#[inline]
pub(crate) fn and3_popcount(a: &[u64], b: &[u64], c: &[u64]) -> u64 {
    a.iter().zip(b).zip(c).map(|((x, y), z)| (x & y & z).count_ones() as u64).sum()
}

pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * WORD + t)
            }
        })
    })
}
