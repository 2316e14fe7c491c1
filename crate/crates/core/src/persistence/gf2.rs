//! Dense bit vectors over Z/2 and incremental elimination.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Highest set bit.
    pub fn top(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

/// Echelon basis keyed by highest set bit.
#[derive(Debug, Default)]
pub(crate) struct Echelon {
    rows: std::collections::HashMap<usize, BitVec>,
}

impl Echelon {
    /// Reduces `v` against the basis; returns `true` (and stores it) if it was independent.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        while let Some(top) = v.top() {
            match self.rows.get(&top) {
                Some(r) => v.xor_assign(r),
                None => {
                    self.rows.insert(top, v);
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Basis of the kernel of the linear map sending coordinate `j` to `images[j]`.
/// Kernel vectors live in a space of dimension `images.len()`.
pub(crate) fn kernel_basis(images: &[BitVec]) -> Vec<BitVec> {
    let n = images.len();
    let mut pivots: std::collections::HashMap<usize, (BitVec, BitVec)> = Default::default();
    let mut kernel = Vec::new();
    for (j, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut track = BitVec::zeros(n);
        track.flip(j);
        loop {
            match v.top() {
                None => {
                    kernel.push(track);
                    break;
                }
                Some(top) => match pivots.get(&top) {
                    Some((pv, pt)) => {
                        v.xor_assign(pv);
                        track.xor_assign(pt);
                    }
                    None => {
                        pivots.insert(top, (v, track));
                        break;
                    }
                },
            }
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(len: usize, ones: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.flip(i);
        }
        v
    }

    #[test]
    fn top_bit() {
        assert_eq!(bits(130, &[3, 129]).top(), Some(129));
        assert_eq!(BitVec::zeros(10).top(), None);
    }

    #[test]
    fn rank_of_dependent_vectors() {
        let mut e = Echelon::default();
        assert!(e.insert(bits(4, &[0, 1])));
        assert!(e.insert(bits(4, &[1, 2])));
        assert!(!e.insert(bits(4, &[0, 2])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn triangle_boundary_kernel() {
        // Edges 01, 12, 02 mapped to vertex pairs: one independent cycle.
        let k = kernel_basis(&[bits(3, &[0, 1]), bits(3, &[1, 2]), bits(3, &[0, 2])]);
        assert_eq!(k, vec![bits(3, &[0, 1, 2])]);
    }
}
