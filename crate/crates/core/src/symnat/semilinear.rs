use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::SymMap;

/// An ultimately periodic subset of ℕ.
///
/// Below `threshold` membership is listed explicitly; from `threshold` on,
/// `x` is a member iff `x mod period` is one of `residues`. The
/// representation is canonical (minimal period, then minimal threshold), so
/// structural equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SemilinearSet {
    threshold: u64,
    finite: BTreeSet<u64>,
    period: u64,
    residues: BTreeSet<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Least `y ≥ from` with `y ≡ r (mod p)`.
fn lift(from: u64, r: u64, p: u64) -> u64 {
    from + (r + p - from % p) % p
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet {
            threshold: 0,
            finite: BTreeSet::new(),
            period: 1,
            residues: BTreeSet::new(),
        }
    }

    pub fn all() -> Self {
        SemilinearSet {
            threshold: 0,
            finite: BTreeSet::new(),
            period: 1,
            residues: BTreeSet::from([0]),
        }
    }

    pub fn from_finite<I: IntoIterator<Item = u64>>(items: I) -> Self {
        let finite: BTreeSet<u64> = items.into_iter().collect();
        let threshold = finite.last().map_or(0, |m| m + 1);
        SemilinearSet {
            threshold,
            finite,
            period: 1,
            residues: BTreeSet::new(),
        }
        .canonical()
    }

    pub fn singleton(x: u64) -> Self {
        SemilinearSet::from_finite([x])
    }

    /// `{start, start + period, ...}`.
    pub fn progression(start: u64, period: u64) -> Self {
        assert!(period > 0, "progression period must be positive");
        SemilinearSet {
            threshold: start,
            finite: BTreeSet::new(),
            period,
            residues: BTreeSet::from([start % period]),
        }
        .canonical()
    }

    /// `{x : x ≥ start}`.
    pub fn from(start: u64) -> Self {
        SemilinearSet::progression(start, 1)
    }

    pub fn contains(&self, x: u64) -> bool {
        if x < self.threshold {
            self.finite.contains(&x)
        } else {
            self.residues.contains(&(x % self.period))
        }
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Members below the threshold.
    pub fn finite_part(&self) -> &BTreeSet<u64> {
        &self.finite
    }

    /// The periodic part as progressions `(start, period)` beginning at the threshold.
    pub fn tails(&self) -> Vec<(u64, u64)> {
        let mut starts: Vec<u64> = self
            .residues
            .iter()
            .map(|&r| lift(self.threshold, r, self.period))
            .collect();
        starts.sort_unstable();
        starts.into_iter().map(|s| (s, self.period)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.residues.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_all(&self) -> bool {
        *self == SemilinearSet::all()
    }

    pub fn min(&self) -> Option<u64> {
        let periodic = self
            .residues
            .iter()
            .map(|&r| lift(self.threshold, r, self.period))
            .min();
        self.finite.first().copied().or(periodic)
    }

    /// The members if the set is finite.
    pub fn elements(&self) -> Option<Vec<u64>> {
        self.is_finite().then(|| self.finite.iter().copied().collect())
    }

    fn combine(&self, other: &SemilinearSet, op: impl Fn(bool, bool) -> bool) -> SemilinearSet {
        let threshold = self.threshold.max(other.threshold);
        let period = lcm(self.period, other.period);
        let finite = (0..threshold)
            .filter(|&x| op(self.contains(x), other.contains(x)))
            .collect();
        let residues = (0..period)
            .filter(|&r| {
                let y = lift(threshold, r, period);
                op(self.contains(y), other.contains(y))
            })
            .collect();
        SemilinearSet {
            threshold,
            finite,
            period,
            residues,
        }
        .canonical()
    }

    pub fn union(&self, other: &SemilinearSet) -> SemilinearSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &SemilinearSet) -> SemilinearSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &SemilinearSet) -> SemilinearSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> SemilinearSet {
        SemilinearSet::all().difference(self)
    }

    pub fn is_subset(&self, other: &SemilinearSet) -> bool {
        self.difference(other).is_empty()
    }

    /// `{x + k : x ∈ self}`.
    pub fn translate(&self, k: u64) -> SemilinearSet {
        SemilinearSet {
            threshold: self.threshold + k,
            finite: self.finite.iter().map(|x| x + k).collect(),
            period: self.period,
            residues: self.residues.iter().map(|r| (r + k) % self.period).collect(),
        }
        .canonical()
    }

    /// `{x : f(x) ∈ self}`.
    pub fn preimage(&self, f: &SymMap) -> SemilinearSet {
        let (n, a, b) = f.tail();
        // Past `start`, membership of f(x) only depends on x mod period.
        let start = if a == 0 {
            n
        } else {
            let needed = self.threshold as i128 - b as i128;
            let steps = if needed <= 0 {
                0
            } else {
                (needed + a as i128 - 1) / a as i128
            };
            n.max(steps as u64)
        };
        let finite = (0..start).filter(|&x| self.contains(f.apply(x))).collect();
        let residues = (0..self.period)
            .filter(|&r| self.contains(f.apply(lift(start, r, self.period))))
            .collect();
        SemilinearSet {
            threshold: start,
            finite,
            period: self.period,
            residues,
        }
        .canonical()
    }

    /// `{f(x) : x ∈ self}`.
    pub fn image(&self, f: &SymMap) -> SemilinearSet {
        let (n, a, _) = f.tail();
        let head = SemilinearSet::from_finite((0..n).filter(|&x| self.contains(x)).map(|x| f.apply(x)));
        let tail_part = self.intersection(&SemilinearSet::from(n));
        if tail_part.is_empty() {
            return head;
        }
        if a == 0 {
            return head.union(&SemilinearSet::singleton(f.apply(n)));
        }
        let start = tail_part.threshold.max(n);
        let below = SemilinearSet::from_finite(tail_part.finite.iter().filter(|&&x| x >= n).map(|&x| f.apply(x)));
        let period = a * tail_part.period;
        let threshold = f.apply(start);
        let residues = tail_part
            .residues
            .iter()
            .map(|&r| f.apply(lift(start, r, tail_part.period)) % period)
            .collect();
        let periodic = SemilinearSet {
            threshold,
            finite: BTreeSet::new(),
            period,
            residues,
        }
        .canonical();
        head.union(&below).union(&periodic)
    }

    fn canonical(mut self) -> SemilinearSet {
        // Smallest period dividing the current one that describes the same tail.
        let p = self.period;
        for d in (1..=p).filter(|&d| p.is_multiple_of(d)) {
            let consistent = (0..p).all(|r| self.residues.contains(&r) == self.residues.contains(&(r % d)));
            if consistent {
                self.residues.retain(|&r| r < d);
                self.period = d;
                break;
            }
        }
        // Lower the threshold while the periodic rule already predicts membership.
        while self.threshold > 0 {
            let x = self.threshold - 1;
            let predicted = self.residues.contains(&(x % self.period));
            if self.finite.contains(&x) != predicted {
                break;
            }
            self.finite.remove(&x);
            self.threshold = x;
        }
        self
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            return write!(f, "ℕ");
        }
        if self.is_empty() {
            return write!(f, "∅");
        }
        let mut parts = Vec::new();
        if !self.finite.is_empty() {
            let items: Vec<String> = self.finite.iter().map(|x| x.to_string()).collect();
            parts.push(format!("{{{}}}", items.join(", ")));
        }
        for (start, period) in self.tails() {
            if period == 1 {
                parts.push(format!("[{start}, ∞)"));
            } else {
                parts.push(format!("{start} + {period}ℕ"));
            }
        }
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(s: &SemilinearSet, up_to: u64) -> Vec<u64> {
        (0..up_to).filter(|&x| s.contains(x)).collect()
    }

    #[test]
    fn canonical_forms_coincide() {
        let evens = SemilinearSet::progression(0, 2);
        let odds = SemilinearSet::progression(1, 2);
        assert_eq!(evens.union(&odds), SemilinearSet::all());
        assert_eq!(evens.intersection(&odds), SemilinearSet::empty());
        assert_eq!(
            SemilinearSet::progression(4, 2).union(&SemilinearSet::from_finite([0, 2])),
            evens
        );
        assert_eq!(SemilinearSet::from(0), SemilinearSet::all());
        assert_eq!(
            SemilinearSet::progression(0, 4).union(&SemilinearSet::progression(2, 4)),
            evens
        );
    }

    #[test]
    fn boolean_operations_match_enumeration() {
        let sets = [
            SemilinearSet::from_finite([1, 4, 9]),
            SemilinearSet::progression(3, 3),
            SemilinearSet::progression(2, 4).union(&SemilinearSet::singleton(7)),
            SemilinearSet::from(5),
            SemilinearSet::empty(),
        ];
        for a in &sets {
            for b in &sets {
                let bound = 10 * lcm(a.period, b.period) + a.threshold + b.threshold;
                for x in 0..bound {
                    assert_eq!(a.union(b).contains(x), a.contains(x) || b.contains(x));
                    assert_eq!(a.intersection(b).contains(x), a.contains(x) && b.contains(x));
                    assert_eq!(a.difference(b).contains(x), a.contains(x) && !b.contains(x));
                }
            }
        }
    }

    #[test]
    fn affine_preimage_and_image() {
        let f = SymMap::affine(2, 1).unwrap();
        let s = SemilinearSet::progression(0, 3);
        let pre = s.preimage(&f);
        for x in 0..60 {
            assert_eq!(pre.contains(x), s.contains(f.apply(x)));
        }
        let img = s.image(&f);
        let expected: BTreeSet<u64> = (0..200).filter(|&x| s.contains(x)).map(|x| f.apply(x)).collect();
        for y in 0..200 {
            assert_eq!(img.contains(y), expected.contains(&y), "y = {y}");
        }
        assert_eq!(members(&SemilinearSet::all().image(&SymMap::constant(5)), 10), vec![5]);
        assert!(SemilinearSet::singleton(5).preimage(&SymMap::constant(5)).is_all());
    }

    #[test]
    fn display_forms() {
        assert_eq!(SemilinearSet::all().to_string(), "ℕ");
        assert_eq!(SemilinearSet::empty().to_string(), "∅");
        assert_eq!(
            SemilinearSet::from_finite([0, 2])
                .union(&SemilinearSet::progression(5, 2))
                .to_string(),
            "{0, 2} ∪ 5 + 2ℕ"
        );
        assert_eq!(SemilinearSet::from(3).to_string(), "[3, ∞)");
        assert_eq!(
            SemilinearSet::progression(3, 2).translate(1),
            SemilinearSet::progression(4, 2)
        );
    }
}
