//! Arithmetic in the prime field `F_p` on `u32` representatives.

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn add(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64 % p as u64) % p as u64) as u32
}

pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow(a, p - 2, p)
}

/// Rank of a matrix over `F_p` by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = inv(rows[rank][col], p);
        for v in rows[rank].iter_mut() {
            *v = mul(*v, scale, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = sub(*x, mul(factor, y, p), p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `|P^n(F_p)|`; zero for `n < 0`.
pub fn projective_count(n: i64, p: u32) -> u64 {
    if n < 0 {
        0
    } else {
        (0..=n as u32).map(|k| (p as u64).pow(k)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert!(is_prime(2) && is_prime(5) && !is_prime(1) && !is_prime(9));
        assert_eq!(mul(inv(3, 7), 3, 7), 1);
        assert_eq!(sub(1, 4, 5), 2);
        assert_eq!(pow(2, 10, 1000), 24);
        assert_eq!(projective_count(2, 2), 7);
        assert_eq!(projective_count(-1, 3), 0);
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank(vec![vec![1, 2, 0], vec![0, 1, 1]], 3), 2);
        assert_eq!(rank(vec![vec![0, 0], vec![0, 0]], 3), 0);
    }
}
