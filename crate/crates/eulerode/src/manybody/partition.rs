//! Integer partitions, dominance order, and the deterministic basis order
//! used for the monomial-symmetric expansion.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts weakly decreasing and trims trailing zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn num_parts(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parts padded with zeros to length n.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }

    /// Dominance: every prefix sum of self is <= the matching prefix sum of
    /// other. Only meaningful between partitions of equal weight.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.weight(), other.weight());
        let n = self.num_parts().max(other.num_parts());
        let (a, b) = (self.padded(n), other.padded(n));
        let (mut sa, mut sb) = (0u64, 0u64);
        for i in 0..n {
            sa += a[i] as u64;
            sb += b[i] as u64;
            if sa > sb {
                return false;
            }
        }
        true
    }
}

/// Basis order: weight ascending, then reverse-lexicographic within a weight
/// (the first nonzero difference of parts decides; larger first part earlier,
/// so the dominant partition comes first). This is a linear extension of
/// dominance: mu strictly dominated by lambda sorts after lambda.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| {
                let n = self.num_parts().max(other.num_parts());
                let (a, b) = (self.padded(n), other.padded(n));
                for i in 0..n {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => continue,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Less => return Ordering::Greater,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `weight` with at most `max_parts` parts, in basis order
/// (dominant first).
pub fn partitions_of(weight: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(weight, weight.max(1), max_parts, &mut cur, &mut out);
    out.sort();
    out
}
