//! Finite-depth prefixes of inverse limits, enumerated without the orbit tree.

use std::collections::BTreeSet;

use crate::setmap::PlMap;
use crate::space::{format_scalar, Scalar};

use super::OrbitError;

/// All `(x_1, ..., x_n)` with `x_1 = z` and `x_i = f_{p_i}(x_{i+1})` for some
/// `p ∈ {1..k}^{n-1}`.
///
/// For each word `p` the composite `f_{p_1} ∘ ... ∘ f_{p_{n-1}}` is built
/// explicitly, its fibre over `z` gives the possible `x_n`, and the remaining
/// coordinates are recovered by applying the bonding maps forward.
pub fn inverse_limit_prefixes(
    fs: &[PlMap],
    z: &Scalar,
    n: usize,
) -> Result<BTreeSet<Vec<Scalar>>, OrbitError> {
    let k = fs.len();
    if k == 0 || n == 0 {
        return Err(OrbitError::IndexOutOfRange { k: n, depth: n });
    }
    let words = k.checked_pow((n - 1) as u32).ok_or(OrbitError::BudgetExceeded { limit: usize::MAX })?;
    let mut out = BTreeSet::new();
    for code in 0..words {
        let mut word = Vec::with_capacity(n - 1);
        let mut c = code;
        for _ in 0..n - 1 {
            word.push(c % k);
            c /= k;
        }
        let mut composite = PlMap::identity();
        for &p in word.iter().rev() {
            composite = fs[p].compose(&composite);
        }
        let Some(fibre) = composite.preimage(z) else {
            continue;
        };
        if !fibre.is_finite() {
            return Err(OrbitError::NotFiniteValued(format_scalar(z)));
        }
        for last in fibre.point_values() {
            let mut seq = vec![last];
            for &p in word.iter().rev() {
                let next = fs[p].eval(seq.last().expect("nonempty"));
                seq.push(next);
            }
            seq.reverse();
            debug_assert_eq!(&seq[0], z);
            out.insert(seq);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{half, one, rat, zero};

    #[test]
    fn tent_identity_depth_two() {
        let tent = PlMap::new("tent", vec![(zero(), zero()), (half(), one()), (one(), zero())]).unwrap();
        let got = inverse_limit_prefixes(&[tent, PlMap::identity()], &rat(2, 3), 2).unwrap();
        let want: BTreeSet<Vec<Scalar>> = [vec![rat(2, 3), rat(1, 3)], vec![rat(2, 3), rat(2, 3)]]
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }
}
