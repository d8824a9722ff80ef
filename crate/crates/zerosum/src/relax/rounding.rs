//! Integer rounding of rational weight vectors: pick integers t̃_i with
//! |t_i − t̃_i| < 1 and a prescribed total. Largest-remainder apportionment
//! is the chosen construction; any output meeting the contract is valid.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lattice::Rational;
use crate::RelaxError;

/// Round non-negative rationals to non-negative integers summing to `n`,
/// moving each entry by strictly less than 1. Fails when `n` is outside
/// [Σ floor(t_i), Σ floor(t_i) + #fractional].
pub fn round_weights(t: &[Rational], n: i64) -> Result<Vec<i64>, RelaxError> {
    for v in t {
        assert!(!v.is_negative(), "weights must be non-negative");
    }
    let floors: Vec<BigInt> = t.iter().map(|v| v.floor().to_integer()).collect();
    let remainders: Vec<Rational> = t
        .iter()
        .zip(&floors)
        .map(|(v, f)| v - Rational::from_integer(f.clone()))
        .collect();
    let floor_sum: BigInt = floors.iter().sum();
    let fractional = remainders.iter().filter(|r| !r.is_zero()).count();
    let lo = floor_sum.clone();
    let hi = &floor_sum + BigInt::from(fractional);
    let target = BigInt::from(n);
    if target < lo || target > hi {
        return Err(RelaxError::InfeasibleRounding {
            n,
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let bumps = (&target - &floor_sum).to_usize().expect("small count");

    // bump the k largest remainders, ties by index (deterministic)
    let mut order: Vec<usize> = (0..t.len()).filter(|&i| !remainders[i].is_zero()).collect();
    order.sort_by(|&i, &j| remainders[j].cmp(&remainders[i]).then(i.cmp(&j)));
    let mut out: Vec<i64> = floors
        .iter()
        .map(|f| f.to_i64().expect("desk-scale weights"))
        .collect();
    for &i in order.iter().take(bumps) {
        out[i] += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    #[test]
    fn largest_remainder_example() {
        // (13/10, 27/10) to total 4: floors (1,2), one bump goes to the
        // larger remainder 7/10 → (1,3); (2,2) would also satisfy the
        // contract but is not what this construction picks
        let t = vec![rat(13, 10), rat(27, 10)];
        assert_eq!(round_weights(&t, 4).unwrap(), vec![1, 3]);
    }

    #[test]
    fn integers_are_fixed_points() {
        let t = vec![rat(2, 1), rat(3, 1)];
        assert_eq!(round_weights(&t, 5).unwrap(), vec![2, 3]);
    }

    #[test]
    fn infeasible_targets_rejected() {
        let t = vec![rat(13, 10), rat(27, 10)];
        // floor sum 3, at most 2 bumps → feasible range [3, 5]
        assert!(round_weights(&t, 2).is_err());
        assert!(round_weights(&t, 6).is_err());
        assert!(round_weights(&t, 3).is_ok());
        assert!(round_weights(&t, 5).is_ok());
    }

    #[test]
    fn contract_holds_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let k = rng.gen_range(1..8);
            let t: Vec<Rational> = (0..k)
                .map(|_| rat(rng.gen_range(0..40), rng.gen_range(1..8)))
                .collect();
            let floor_sum: i64 = t
                .iter()
                .map(|v| v.floor().to_integer().to_i64().unwrap())
                .sum();
            let frac = t.iter().filter(|v| !v.fract().is_zero()).count() as i64;
            let n = rng.gen_range(floor_sum..=floor_sum + frac);
            let out = round_weights(&t, n).unwrap();
            assert_eq!(out.iter().sum::<i64>(), n);
            for (v, &o) in t.iter().zip(&out) {
                let diff = v - rat(o, 1);
                assert!(diff.abs() < rat(1, 1), "|{v} - {o}| >= 1");
                assert!(o >= 0);
            }
        }
    }
}
