use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{binomial, Rational};

struct Table {
    values: Vec<Rational>,
    // lcm of every denominator in `values`
    common_den: BigInt,
}

// B_0, B_1, B_2, ... grown on demand. Odd entries past B_1 are stored as zero.
static TABLE: LazyLock<Mutex<Table>> = LazyLock::new(|| {
    Mutex::new(Table {
        values: vec![Rational::one(), Rational::new(BigInt::from(-1), BigInt::from(2))],
        common_den: BigInt::from(2),
    })
});

/// The `k`-th Bernoulli number, with `B_1 = -1/2`.
///
/// Computed from `sum_{j=0}^{n} C(n+1, j) B_j = 0` and memoized. The sum is
/// accumulated over the common denominator of the earlier terms.
pub fn bernoulli(k: usize) -> Rational {
    let mut table = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    while table.values.len() <= k {
        let n = table.values.len();
        let value = if n % 2 == 1 {
            Rational::zero()
        } else {
            let n1 = (n + 1) as u64;
            let l = &table.common_den;
            let term = |j: usize| {
                let b = &table.values[j];
                binomial(n1, j as u64) * b.numer() * (l / b.denom())
            };
            let mut acc = term(0) + term(1);
            for j in (2..n).step_by(2) {
                acc += term(j);
            }
            Rational::new(-acc, l * BigInt::from(n1))
        };
        if !value.is_zero() {
            let l = table.common_den.lcm(value.denom());
            table.common_den = l;
        }
        table.values.push(value);
    }
    table.values[k].clone()
}
