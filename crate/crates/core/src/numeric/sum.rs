//! Compensated summation in a fixed binary-tree order.
//!
//! The tree shape depends only on the slice length, so any parallel schedule
//! that respects subtree boundaries reproduces the sequential result bit for
//! bit. Leaves use Neumaier's running compensation; internal nodes merge
//! (sum, error) pairs with exact two-sums.

use num_complex::Complex64;

/// Ranges at or below this length are summed sequentially.
const LEAF_LEN: usize = 64;

/// Knuth two-sum: returns `(fl(a + b), exact error)`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let err = (a - (s - bv)) + (b - bv);
    (s, err)
}

#[derive(Clone, Copy)]
struct Partial {
    sum: f64,
    err: f64,
}

impl Partial {
    fn add(self, x: f64) -> Partial {
        let (sum, e) = two_sum(self.sum, x);
        Partial {
            sum,
            err: self.err + e,
        }
    }

    fn merge(self, other: Partial) -> Partial {
        let (sum, e) = two_sum(self.sum, other.sum);
        Partial {
            sum,
            err: self.err + other.err + e,
        }
    }

    fn value(self) -> f64 {
        self.sum + self.err
    }
}

fn tree_f64(values: &[f64]) -> Partial {
    if values.len() <= LEAF_LEN {
        let mut acc = Partial { sum: 0.0, err: 0.0 };
        for &x in values {
            acc = acc.add(x);
        }
        acc
    } else {
        let mid = values.len() / 2;
        tree_f64(&values[..mid]).merge(tree_f64(&values[mid..]))
    }
}

/// Compensated fixed-tree sum of real values.
pub fn compensated_sum_f64(values: &[f64]) -> f64 {
    tree_f64(values).value()
}

/// Compensated fixed-tree sum of complex values (componentwise).
pub fn compensated_sum(values: &[Complex64]) -> Complex64 {
    fn tree(values: &[Complex64]) -> (Partial, Partial) {
        if values.len() <= LEAF_LEN {
            let mut re = Partial { sum: 0.0, err: 0.0 };
            let mut im = Partial { sum: 0.0, err: 0.0 };
            for z in values {
                re = re.add(z.re);
                im = im.add(z.im);
            }
            (re, im)
        } else {
            let mid = values.len() / 2;
            let (lre, lim) = tree(&values[..mid]);
            let (rre, rim) = tree(&values[mid..]);
            (lre.merge(rre), lim.merge(rim))
        }
    }
    let (re, im) = tree(values);
    Complex64::new(re.value(), im.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(compensated_sum(&[]), c(0.0, 0.0));
    }

    #[test]
    fn exact_cancellation() {
        assert_eq!(compensated_sum(&[c(1.0, 0.0), c(-1.0, 0.0)]), c(0.0, 0.0));
    }

    #[test]
    fn recovers_swamped_unit() {
        // Exact-arithmetic oracle: 10^16 + 1 - 10^16 = 1. Naive f64 summation
        // loses the 1; the compensated tree must not.
        let values = [c(1e16, 0.0), c(1.0, 0.0), c(-1e16, 0.0)];
        assert_eq!(compensated_sum(&values), c(1.0, 0.0));
        let naive: f64 = [1e16, 1.0, -1e16].iter().sum();
        assert_eq!(naive, 0.0); // demonstrates why compensation is needed
    }

    #[test]
    fn matches_integer_oracle_on_mixed_magnitudes() {
        // All values are exactly representable integers, so i128 arithmetic
        // is an exact oracle.
        let ints: Vec<i64> = vec![1 << 52, -(1 << 51), 3, -7, 1 << 40, 11, -(1 << 52)];
        let exact: i128 = ints.iter().map(|&x| x as i128).sum();
        let values: Vec<Complex64> = ints.iter().map(|&x| c(x as f64, 0.0)).collect();
        assert_eq!(compensated_sum(&values).re, exact as f64);
    }

    #[test]
    fn split_invariance_of_the_tree() {
        // Summing the two subtrees independently and merging must equal the
        // one-call result, which is what makes worker partitioning safe.
        let values: Vec<f64> = (0..1000).map(|i| ((i * 2654435761_u64 as usize) as f64).sin() * 1e8).collect();
        let total = compensated_sum_f64(&values);
        let mid = values.len() / 2;
        let left = tree_f64(&values[..mid]);
        let right = tree_f64(&values[mid..]);
        assert_eq!(left.merge(right).value(), total);
    }
}
