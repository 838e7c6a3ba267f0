//! Divisor-class arithmetic on the Picard lattice of a six-point blow-up:
//! the intersection pairing, standard Cremona transformations, the
//! degree-reduction loop, and an exhaustive enumeration oracle for the
//! classes with self-intersection 4 and hyperplane degree 6.

use crate::error::{Error, Result};

/// An integer class `n L - sum a_i E_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub n: i64,
    pub a: [i64; 6],
}

impl DivisorClass {
    pub fn new(n: i64, a: [i64; 6]) -> DivisorClass {
        DivisorClass { n, a }
    }

    /// The hyperplane class `3L - sum E_i`.
    pub fn hyperplane() -> DivisorClass {
        DivisorClass::new(3, [1; 6])
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        let mut a = [0i64; 6];
        for i in 0..6 {
            a[i] = self.a[i] - other.a[i];
        }
        DivisorClass::new(self.n - other.n, a)
    }

    pub fn sorted_desc(&self) -> DivisorClass {
        let mut a = self.a;
        a.sort_unstable_by(|x, y| y.cmp(x));
        DivisorClass::new(self.n, a)
    }

    /// The two conditions `n^2 = sum a_i^2 + 4` and `3n = sum a_i + 6`.
    pub fn satisfies_nn2(&self) -> bool {
        let sum: i64 = self.a.iter().sum();
        let sq: i64 = self.a.iter().map(|x| x * x).sum();
        self.n * self.n == sq + 4 && 3 * self.n == sum + 6
    }

    pub fn to_compact_string(&self) -> String {
        format!(
            "({};{},{},{},{},{},{})",
            self.n, self.a[0], self.a[1], self.a[2], self.a[3], self.a[4], self.a[5]
        )
    }

    /// Pairings with the 27 exceptional classes E_i, L - E_i - E_j, and
    /// 2L - sum E + E_i. The sorted list is invariant under permutations
    /// and Cremona moves, which permute the 27 classes.
    pub fn line_pairings(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(27);
        for i in 0..6 {
            out.push(self.a[i]);
        }
        for i in 0..6 {
            for j in i + 1..6 {
                out.push(self.n - self.a[i] - self.a[j]);
            }
        }
        let total: i64 = self.a.iter().sum();
        for i in 0..6 {
            out.push(2 * self.n - total + self.a[i]);
        }
        out.sort_unstable();
        out
    }

    /// Nonnegative pairing with every one of the 27 exceptional classes.
    pub fn is_nef_on_lines(&self) -> bool {
        self.line_pairings().first().map_or(true, |&m| m >= 0)
    }
}

/// Intersection pairing `n n' - sum a_i a_i'`.
pub fn pairing(c1: &DivisorClass, c2: &DivisorClass) -> i64 {
    let mut acc = c1.n * c2.n;
    for i in 0..6 {
        acc -= c1.a[i] * c2.a[i];
    }
    acc
}

/// The standard Cremona transformation centered at three indices:
/// `n' = 2n - a_i - a_j - a_k`, `a_i' = n - a_j - a_k` cyclically, the
/// other entries unchanged. Applying the same triple twice is the
/// identity.
pub fn cremona(c: &DivisorClass, triple: [usize; 3]) -> DivisorClass {
    let [i, j, k] = triple;
    assert!(i != j && j != k && i != k, "indices must be distinct");
    let s = c.a[i] + c.a[j] + c.a[k];
    let mut a = c.a;
    a[i] = c.n - c.a[j] - c.a[k];
    a[j] = c.n - c.a[i] - c.a[k];
    a[k] = c.n - c.a[i] - c.a[j];
    DivisorClass::new(2 * c.n - s, a)
}

#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub before: DivisorClass,
    pub triple: [usize; 3],
    pub after: DivisorClass,
}

#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub start: DivisorClass,
    pub steps: Vec<ReductionStep>,
    pub terminal: DivisorClass,
    /// Classes with a negative multiplicity encountered mid-reduction.
    /// The source argument implicitly assumes this never happens; the
    /// exhaustive run records the actual evidence.
    pub negatives_logged: Vec<DivisorClass>,
    /// Whether the terminal is (2;0,0,0,0,0,0) or (3;2,1,0,0,0,0).
    pub terminal_expected: bool,
}

pub const TERMINAL_CONIC: DivisorClass = DivisorClass { n: 2, a: [0; 6] };
pub const TERMINAL_CUBIC: DivisorClass = DivisorClass {
    n: 3,
    a: [2, 1, 0, 0, 0, 0],
};

/// Reduce a class by repeatedly sorting descending and applying the
/// Cremona transformation on the three largest multiplicities, until the
/// degree drops to 3 or less.
pub fn reduce(c: &DivisorClass) -> Result<ReductionTrace> {
    if !c.satisfies_nn2() {
        return Err(Error::NotNn2);
    }
    let start = c.sorted_desc();
    if start.a[5] < 0 {
        return Err(Error::NotNn2);
    }
    let mut cur = start;
    let mut steps = Vec::new();
    let mut negatives = Vec::new();
    let limit = 100;
    while cur.n > 3 {
        if steps.len() >= limit {
            return Err(Error::NonTermination(limit));
        }
        let sorted = cur.sorted_desc();
        let next = cremona(&sorted, [0, 1, 2]);
        debug_assert!(next.satisfies_nn2());
        if sorted.n >= 6 {
            debug_assert!(next.n < sorted.n, "degree must strictly drop for n >= 6");
        }
        if next.a.iter().any(|&x| x < 0) {
            negatives.push(next);
        }
        steps.push(ReductionStep {
            before: sorted,
            triple: [0, 1, 2],
            after: next,
        });
        cur = next;
    }
    let terminal = cur.sorted_desc();
    let terminal_expected = terminal == TERMINAL_CONIC || terminal == TERMINAL_CUBIC;
    Ok(ReductionTrace {
        start,
        steps,
        terminal,
        negatives_logged: negatives,
        terminal_expected,
    })
}

/// All classes `(n; a sorted descending, a_i >= 0)` with `n <= n_max`
/// satisfying both conditions, by backtracking over partitions with
/// square-sum pruning.
pub fn enumerate_nn2(n_max: i64) -> Vec<DivisorClass> {
    assert!(n_max <= 64, "enumeration bound capped at 64");
    let mut out = Vec::new();
    for n in 2..=n_max {
        let target_sum = 3 * n - 6;
        let target_sq = n * n - 4;
        if target_sum < 0 || target_sq < 0 {
            continue;
        }
        let mut a = [0i64; 6];
        search(n, 0, target_sum, target_sq, n, &mut a, &mut out);
    }
    out
}

fn search(
    n: i64,
    pos: usize,
    rem_sum: i64,
    rem_sq: i64,
    cap: i64,
    a: &mut [i64; 6],
    out: &mut Vec<DivisorClass>,
) {
    if pos == 6 {
        if rem_sum == 0 && rem_sq == 0 {
            out.push(DivisorClass::new(n, *a));
        }
        return;
    }
    let slots = (6 - pos) as i64;
    let hi = cap.min(rem_sum);
    for v in (0..=hi).rev() {
        // remaining entries are at most v each: both totals must stay reachable
        if v * slots < rem_sum {
            break;
        }
        let nsum = rem_sum - v;
        let nsq = rem_sq - v * v;
        if nsq < 0 {
            continue;
        }
        // the remaining square sum can be at most v^2 per slot, and at
        // least (sum/slots)^2-ish; cheap upper prune only
        if nsq > v * v * (slots - 1) {
            continue;
        }
        a[pos] = v;
        search(n, pos + 1, nsum, nsq, v, a, out);
        a[pos] = 0;
    }
}

/// The derived class `D = c - H` with its two pairings, which must equal
/// `(D.H, D^2) = (3, -5)` for every class satisfying the two conditions.
pub fn dcheck(c: &DivisorClass) -> Result<(DivisorClass, i64, i64)> {
    if !c.satisfies_nn2() {
        return Err(Error::NotNn2);
    }
    let h = DivisorClass::hyperplane();
    let d = c.sub(&h);
    Ok((d, pairing(&d, &h), pairing(&d, &d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_paper_values() {
        let conic = DivisorClass::new(2, [0; 6]);
        assert_eq!(pairing(&conic, &conic), 4);
        let c = DivisorClass::new(3, [2, 1, 0, 0, 0, 0]);
        assert_eq!(pairing(&c, &c), 4);
        let h = DivisorClass::hyperplane();
        assert_eq!(pairing(&conic, &h), 6);
        assert_eq!(pairing(&c, &h), 6);
    }

    #[test]
    fn cremona_direct_formula() {
        let c = DivisorClass::new(4, [3, 1, 1, 1, 0, 0]);
        let r = cremona(&c, [0, 1, 2]);
        assert_eq!(r, DivisorClass::new(3, [2, 0, 0, 1, 0, 0]));
    }

    #[test]
    fn cremona_is_involutive_and_isometric() {
        let c = DivisorClass::new(2, [0; 6]);
        let img = cremona(&c, [0, 1, 2]);
        assert_eq!(img, DivisorClass::new(4, [2, 2, 2, 0, 0, 0]));
        assert_eq!(cremona(&img, [0, 1, 2]), c);
        let d = DivisorClass::new(5, [3, 2, 2, 2, 0, 0]);
        for t in [[0usize, 1, 2], [1, 3, 5], [0, 2, 4]] {
            assert_eq!(cremona(&cremona(&d, t), t), d);
            assert_eq!(pairing(&cremona(&c, t), &cremona(&d, t)), pairing(&c, &d));
        }
    }

    #[test]
    fn hyperplane_is_fixed() {
        let h = DivisorClass::hyperplane();
        assert_eq!(cremona(&h, [0, 1, 2]), h);
    }

    #[test]
    fn reduce_paper_cases() {
        let t = reduce(&DivisorClass::new(4, [3, 1, 1, 1, 0, 0])).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.terminal, TERMINAL_CUBIC);

        let t = reduce(&DivisorClass::new(4, [2, 2, 2, 0, 0, 0])).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.terminal, TERMINAL_CONIC);

        let t = reduce(&DivisorClass::new(10, [4; 6])).unwrap();
        assert_eq!(
            t.steps[0].after.sorted_desc(),
            DivisorClass::new(8, [4, 4, 4, 2, 2, 2])
        );
        assert_eq!(t.terminal, TERMINAL_CONIC);
        assert!(t.negatives_logged.is_empty());
    }

    #[test]
    fn reduce_requires_nn2() {
        assert!(matches!(
            reduce(&DivisorClass::hyperplane()),
            Err(Error::NotNn2)
        ));
    }

    #[test]
    fn enumerate_small_degrees() {
        let all = enumerate_nn2(4);
        let n2: Vec<_> = all.iter().filter(|c| c.n == 2).collect();
        assert_eq!(n2, vec![&DivisorClass::new(2, [0; 6])]);
        assert!(all.iter().all(|c| c.satisfies_nn2()));
        let n4: Vec<_> = all.iter().filter(|c| c.n == 4).cloned().collect();
        assert_eq!(
            n4,
            vec![
                DivisorClass::new(4, [3, 1, 1, 1, 0, 0]),
                DivisorClass::new(4, [2, 2, 2, 0, 0, 0]),
            ]
        );
    }

    #[test]
    fn all_equal_solutions() {
        let all = enumerate_nn2(64);
        let eq: Vec<_> = all
            .iter()
            .filter(|c| c.a.iter().all(|&x| x == c.a[0]))
            .collect();
        assert_eq!(eq.len(), 2);
        assert_eq!(*eq[0], DivisorClass::new(2, [0; 6]));
        assert_eq!(*eq[1], DivisorClass::new(10, [4; 6]));
    }

    #[test]
    fn dcheck_paper_values() {
        let (d, dh, dd) = dcheck(&DivisorClass::new(2, [0; 6])).unwrap();
        assert_eq!(d, DivisorClass::new(-1, [-1; 6]));
        assert_eq!((dh, dd), (3, -5));
        let (d, dh, dd) = dcheck(&DivisorClass::new(3, [2, 1, 0, 0, 0, 0])).unwrap();
        assert_eq!(d, DivisorClass::new(0, [1, 0, -1, -1, -1, -1]));
        assert_eq!((dh, dd), (3, -5));
        assert!(dcheck(&DivisorClass::hyperplane()).is_err());
    }

    #[test]
    fn nef_classes_reduce_to_the_two_terminals() {
        for c in enumerate_nn2(32) {
            if !c.is_nef_on_lines() {
                continue;
            }
            let t = reduce(&c).unwrap();
            assert!(
                t.terminal_expected,
                "nef class {} reduced to {}",
                c.to_compact_string(),
                t.terminal.to_compact_string()
            );
            assert!(t.negatives_logged.is_empty());
        }
    }

    #[test]
    fn line_pairing_multiset_is_cremona_invariant() {
        let c = DivisorClass::new(5, [3, 3, 1, 1, 1, 0]);
        for t in [[0usize, 1, 2], [2, 3, 4], [0, 3, 5]] {
            assert_eq!(c.line_pairings(), cremona(&c, t).line_pairings());
        }
    }
}
