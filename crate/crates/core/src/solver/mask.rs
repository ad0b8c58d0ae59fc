//! Fixed-width vertex masks for the search hot path.

use std::fmt::Debug;
use std::hash::Hash;

pub trait Mask: Copy + Eq + Hash + Debug + Send + Sync + 'static {
    const BITS: usize;

    fn zero() -> Self;
    fn lowest_n(n: usize) -> Self;
    fn test(&self, i: usize) -> bool;
    fn set(&mut self, i: usize);
    fn clear(&mut self, i: usize);
    fn and(self, o: Self) -> Self;
    fn or(self, o: Self) -> Self;
    fn andnot(self, o: Self) -> Self;
    fn is_zero(&self) -> bool;
    fn count(&self) -> u32;
    fn lowest(&self) -> Option<usize>;

    fn bit(i: usize) -> Self {
        let mut m = Self::zero();
        m.set(i);
        m
    }

    fn ones(self) -> Ones<Self> {
        Ones(self)
    }

    fn intersects(self, o: Self) -> bool {
        !self.and(o).is_zero()
    }
}

pub struct Ones<M>(M);

impl<M: Mask> Iterator for Ones<M> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        let i = self.0.lowest()?;
        self.0.clear(i);
        Some(i)
    }
}

macro_rules! int_mask {
    ($t:ty) => {
        impl Mask for $t {
            const BITS: usize = <$t>::BITS as usize;

            #[inline]
            fn zero() -> Self {
                0
            }
            #[inline]
            fn lowest_n(n: usize) -> Self {
                if n >= <Self as Mask>::BITS {
                    <$t>::MAX
                } else {
                    ((1 as $t) << n) - 1
                }
            }
            #[inline]
            fn test(&self, i: usize) -> bool {
                *self >> i & 1 == 1
            }
            #[inline]
            fn set(&mut self, i: usize) {
                *self |= (1 as $t) << i;
            }
            #[inline]
            fn clear(&mut self, i: usize) {
                *self &= !((1 as $t) << i);
            }
            #[inline]
            fn and(self, o: Self) -> Self {
                self & o
            }
            #[inline]
            fn or(self, o: Self) -> Self {
                self | o
            }
            #[inline]
            fn andnot(self, o: Self) -> Self {
                self & !o
            }
            #[inline]
            fn is_zero(&self) -> bool {
                *self == 0
            }
            #[inline]
            fn count(&self) -> u32 {
                self.count_ones()
            }
            #[inline]
            fn lowest(&self) -> Option<usize> {
                if *self == 0 {
                    None
                } else {
                    Some(self.trailing_zeros() as usize)
                }
            }
        }
    };
}

int_mask!(u64);
int_mask!(u128);

/// Masks wider than 128 bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Wide<const W: usize>(pub [u64; W]);

impl<const W: usize> Mask for Wide<W> {
    const BITS: usize = 64 * W;

    fn zero() -> Self {
        Wide([0; W])
    }
    fn lowest_n(n: usize) -> Self {
        let mut m = [0u64; W];
        for (i, w) in m.iter_mut().enumerate() {
            let lo = i * 64;
            if n >= lo + 64 {
                *w = u64::MAX;
            } else if n > lo {
                *w = (1u64 << (n - lo)) - 1;
            }
        }
        Wide(m)
    }
    fn test(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn and(self, o: Self) -> Self {
        Wide(std::array::from_fn(|i| self.0[i] & o.0[i]))
    }
    fn or(self, o: Self) -> Self {
        Wide(std::array::from_fn(|i| self.0[i] | o.0[i]))
    }
    fn andnot(self, o: Self) -> Self {
        Wide(std::array::from_fn(|i| self.0[i] & !o.0[i]))
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}
