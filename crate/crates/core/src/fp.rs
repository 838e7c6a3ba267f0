//! Raw word-sized prime-field helpers for the exhaustive scans.
//!
//! The public API works with [`crate::scalar::Scalar`]; these routines keep
//! the hot projective-space loops allocation-free.

use crate::scalar::{fp_inv, FieldTag, Scalar};

/// Rank of an `rows x cols` matrix stored row-major in `m`, destructively,
/// over `F_p`.
pub fn rank_in_place(m: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] % p != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                m.swap(piv * cols + j, rank * cols + j);
            }
        }
        let inv = fp_inv(m[rank * cols + c], p);
        for j in c..cols {
            m[rank * cols + j] = m[rank * cols + j] % p * inv % p;
        }
        for r in 0..rows {
            if r == rank || m[r * cols + c] % p == 0 {
                continue;
            }
            let f = m[r * cols + c] % p;
            for j in c..cols {
                let sub = f * m[rank * cols + j] % p;
                m[r * cols + j] = (m[r * cols + j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// 3x3 determinant mod p of rows taken from a 3 x `stride` row-major
/// buffer at the given column triple. Entries must already be reduced.
#[inline]
fn det3_mod(m: &[u64], stride: usize, c0: usize, c1: usize, c2: usize, p: u64) -> u64 {
    let a = |r: usize, c: usize| m[r * stride + c];
    let m0 = (a(1, c1) * a(2, c2) % p + p - a(1, c2) * a(2, c1) % p) % p;
    let m1 = (a(1, c0) * a(2, c2) % p + p - a(1, c2) * a(2, c0) % p) % p;
    let m2 = (a(1, c0) * a(2, c1) % p + p - a(1, c1) * a(2, c0) % p) % p;
    (a(0, c0) * m0 % p + p - a(0, c1) * m1 % p + a(0, c2) * m2 % p) % p
}

/// Does a 3 x 4 matrix over `F_p` have rank at most 2? All four maximal
/// minors must vanish; the first nonzero minor rejects early.
#[inline]
pub fn rank3x4_le2(m: &[u64], p: u64) -> bool {
    det3_mod(m, 4, 1, 2, 3, p) == 0
        && det3_mod(m, 4, 0, 2, 3, p) == 0
        && det3_mod(m, 4, 0, 1, 3, p) == 0
        && det3_mod(m, 4, 0, 1, 2, p) == 0
}

/// Drive a closure over every canonical representative of the projective
/// space of dimension `n-1` over `F_p` (first nonzero coordinate 1),
/// reusing one coordinate buffer. The hot scans use this to stay
/// allocation-free.
pub fn scan_projective(p: u64, n: usize, mut f: impl FnMut(&[u64])) {
    let mut v = vec![0u64; n];
    for lead in 0..n {
        for x in v.iter_mut().take(lead) {
            *x = 0;
        }
        v[lead] = 1;
        let free = n - 1 - lead;
        let span = p.pow(free as u32);
        for x in v.iter_mut().skip(lead + 1) {
            *x = 0;
        }
        for counter in 0..span {
            let mut c = counter;
            for slot in (lead + 1..n).rev() {
                v[slot] = c % p;
                c /= p;
            }
            f(&v);
        }
    }
}

/// Iterator over canonical representatives of the projective space of
/// dimension `n-1` over `F_p`: the first nonzero coordinate is 1.
pub struct ProjectivePoints {
    p: u64,
    n: usize,
    lead: usize,
    counter: u64,
    done: bool,
}

impl ProjectivePoints {
    pub fn new(p: u64, n: usize) -> ProjectivePoints {
        ProjectivePoints {
            p,
            n,
            lead: 0,
            counter: 0,
            done: n == 0,
        }
    }

    pub fn count(p: u64, n: usize) -> u64 {
        (0..n).map(|k| p.pow((n - 1 - k) as u32)).sum()
    }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let free = self.n - 1 - self.lead;
        let span = self.p.pow(free as u32);
        let mut v = vec![0u64; self.n];
        v[self.lead] = 1;
        let mut c = self.counter;
        for slot in (self.lead + 1..self.n).rev() {
            v[slot] = c % self.p;
            c /= self.p;
        }
        self.counter += 1;
        if self.counter == span {
            self.counter = 0;
            self.lead += 1;
            if self.lead == self.n {
                self.done = true;
            }
        }
        Some(v)
    }
}

pub fn to_scalars(v: &[u64], p: u64) -> Vec<Scalar> {
    v.iter()
        .map(|&x| Scalar::Fp {
            value: x % p,
            modulus: p,
        })
        .collect()
}

pub fn field(p: u64) -> FieldTag {
    FieldTag::Prime(p)
}
