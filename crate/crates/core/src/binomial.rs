use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

static ROWS: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();

/// `C(n, r)`, with `C(n, r) = 0` whenever `r < 0`, `r > n` or `n < 0`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        return BigInt::zero();
    }
    let (n, r) = (n as usize, r as usize);
    let rows = ROWS.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]));
    {
        let table = rows.read().unwrap();
        if let Some(row) = table.get(n) {
            return row[r].clone();
        }
    }
    let mut table = rows.write().unwrap();
    while table.len() <= n {
        let prev = table.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        table.push(row);
    }
    table[n][r].clone()
}
