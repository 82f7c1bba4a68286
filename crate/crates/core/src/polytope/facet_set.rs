use std::cmp::Ordering;
use std::fmt;

/// A subset of facet indices {0, …, d−1}, d ≤ 64.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FacetSet(pub u64);

impl FacetSet {
    pub const EMPTY: FacetSet = FacetSet(0);

    pub fn full(d: usize) -> Self {
        if d >= 64 {
            FacetSet(u64::MAX)
        } else {
            FacetSet((1u64 << d) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        FacetSet(it.into_iter().fold(0u64, |acc, i| acc | (1u64 << i)))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: FacetSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: FacetSet) -> FacetSet {
        FacetSet(self.0 & other.0)
    }

    pub fn union(self, other: FacetSet) -> FacetSet {
        FacetSet(self.0 | other.0)
    }

    pub fn difference(self, other: FacetSet) -> FacetSet {
        FacetSet(self.0 & !other.0)
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn lex_cmp(self, other: FacetSet) -> Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl fmt::Debug for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All k-subsets of {0, …, d−1} in lexicographic order.
pub fn subsets_of_size(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    rec(0, d, k, &mut cur, &mut out);
    out
}
