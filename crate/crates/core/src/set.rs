use std::fmt;

use fixedbitset::FixedBitSet;

/// Index of a category inside a [`CategoryLattice`](crate::CategoryLattice).
///
/// Indices follow the lexicographic order of category ids, so iterating a
/// [`CategorySet`] yields ids in sorted order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatIx(pub(crate) usize);

impl CatIx {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A set of categories of one lattice, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CategorySet {
    bits: FixedBitSet,
}

impl CategorySet {
    pub fn empty(universe: usize) -> Self {
        CategorySet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        CategorySet { bits }
    }

    pub fn singleton(universe: usize, c: CatIx) -> Self {
        let mut set = Self::empty(universe);
        set.insert(c);
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, c: CatIx) {
        self.bits.insert(c.0);
    }

    pub fn contains(&self, c: CatIx) -> bool {
        self.bits.contains(c.0)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &CategorySet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &CategorySet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &CategorySet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &CategorySet) {
        self.bits.intersect_with(&other.bits);
    }

    /// Elements of `self` that are not in `other`.
    pub fn difference(&self, other: &CategorySet) -> CategorySet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        CategorySet { bits }
    }

    /// The only element, if the set is a singleton.
    pub fn single(&self) -> Option<CatIx> {
        let mut it = self.iter();
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CatIx> + '_ {
        self.bits.ones().map(CatIx)
    }
}

impl fmt::Debug for CategorySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}
