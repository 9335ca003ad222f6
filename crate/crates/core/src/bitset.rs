//! Small fixed-width bitsets for root indices and divisor classes.

use std::fmt;

macro_rules! bitset {
    ($(#[$meta:meta])* $name:ident, $word:ty, $bits:expr) => {
        $(#[$meta])*
        #[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub $word);

        impl $name {
            pub const CAPACITY: usize = $bits;
            pub const EMPTY: Self = Self(0);

            /// The set `{0, .., n-1}`.
            pub fn full(n: usize) -> Self {
                assert!(n <= $bits);
                if n == $bits {
                    Self(<$word>::MAX)
                } else {
                    Self(((1 as $word) << n) - 1)
                }
            }

            pub fn singleton(i: usize) -> Self {
                Self((1 as $word) << i)
            }

            #[inline]
            pub fn contains(self, i: usize) -> bool {
                i < $bits && (self.0 >> i) & 1 == 1
            }

            #[inline]
            pub fn insert(&mut self, i: usize) {
                self.0 |= (1 as $word) << i;
            }

            #[inline]
            pub fn remove(&mut self, i: usize) {
                self.0 &= !((1 as $word) << i);
            }

            #[inline]
            pub fn with(self, i: usize) -> Self {
                Self(self.0 | ((1 as $word) << i))
            }

            #[inline]
            pub fn without(self, i: usize) -> Self {
                Self(self.0 & !((1 as $word) << i))
            }

            #[inline]
            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            #[inline]
            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            #[inline]
            pub fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            #[inline]
            pub fn intersection(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            #[inline]
            pub fn difference(self, other: Self) -> Self {
                Self(self.0 & !other.0)
            }

            #[inline]
            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn iter(self) -> impl Iterator<Item = usize> {
                let mut rest = self.0;
                std::iter::from_fn(move || {
                    if rest == 0 {
                        None
                    } else {
                        let i = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        Some(i)
                    }
                })
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
                let mut s = Self::EMPTY;
                for i in iter {
                    s.insert(i);
                }
                s
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

bitset!(
    /// Set of positive-root indices (at most 128 positive roots).
    RootSet,
    u128,
    128
);

bitset!(
    /// Set of divisor-class labels, i.e. a subset `I` of the class index set.
    ClassSet,
    u32,
    32
);

impl ClassSet {
    /// All subsets of `{0, .., n-1}` in increasing bitset order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ClassSet> {
        assert!(n < 32, "at most 31 classes can be enumerated");
        (0u32..(1u32 << n)).map(ClassSet)
    }
}
