//! Number-theoretic transform convolution for residues modulo any `M <= 2^32`.
//!
//! The product is computed modulo three NTT-friendly primes and recombined by CRT.
//! With inputs below `2^32` and length below `2^21`, every true convolution value is
//! below `2^85`, under the product of the three primes (about `2^86`).

const PRIMES: [u64; 3] = [998_244_353, 167_772_161, 469_762_049];
const ROOT: u64 = 3;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], invert: bool, p: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(ROOT, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * twiddles[k] % p;
                lo[k] = if u + v >= p { u + v - p } else { u + v };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn convolve_prime(a: &[u64], b: &[u64], size: usize, out_len: usize, p: u64) -> Vec<u64> {
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (d, s) in fa.iter_mut().zip(a) {
        *d = s % p;
    }
    for (d, s) in fb.iter_mut().zip(b) {
        *d = s % p;
    }
    ntt(&mut fa, false, p);
    ntt(&mut fb, false, p);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % p;
    }
    ntt(&mut fa, true, p);
    fa.truncate(out_len);
    fa
}

/// Truncated product `a * b mod (q^out_len, m)`; inputs are residues in `[0, m)`.
pub(crate) fn convolve_mod(a: &[u64], b: &[u64], out_len: usize, m: u64) -> Vec<u64> {
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    if a.is_empty() || b.is_empty() {
        return vec![0; out_len];
    }
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    let keep = out_len.min(full);
    let r: Vec<Vec<u64>> = PRIMES.iter().map(|&p| convolve_prime(a, b, size, keep, p)).collect();

    let (p0, p1, p2) = (PRIMES[0] as u128, PRIMES[1] as u128, PRIMES[2] as u128);
    let p01 = p0 * p1;
    let inv_p0_mod_p1 = pow_mod(PRIMES[0] % PRIMES[1], PRIMES[1] - 2, PRIMES[1]) as u128;
    let inv_p01_mod_p2 = pow_mod((p01 % p2) as u64, PRIMES[2] - 2, PRIMES[2]) as u128;
    let m128 = m as u128;
    let p01_mod_m = p01 % m128;

    let mut out = vec![0u64; out_len];
    for i in 0..keep {
        let (r0, r1, r2) = (r[0][i] as u128, r[1][i] as u128, r[2][i] as u128);
        // x = r0 + p0 * t1 + p0 p1 * t2
        let t1 = ((r1 + p1 - r0 % p1) % p1) * inv_p0_mod_p1 % p1;
        let x01 = r0 + p0 * t1;
        let t2 = ((r2 + p2 - x01 % p2) % p2) * inv_p01_mod_p2 % p2;
        let v = (x01 % m128 + (p01_mod_m * (t2 % m128)) % m128) % m128;
        out[i] = v as u64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &[u64], b: &[u64], n: usize, m: u64) -> Vec<u64> {
        let mut c = vec![0u128; n];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < n {
                    c[i + j] = (c[i + j] + x as u128 * y as u128) % m as u128;
                }
            }
        }
        c.into_iter().map(|v| v as u64).collect()
    }

    #[test]
    fn matches_schoolbook_for_large_moduli() {
        let m = (1u64 << 32) - 5;
        let a: Vec<u64> = (0..300u64).map(|i| (i * 2_654_435_761) % m).collect();
        let b: Vec<u64> = (0..257u64).map(|i| m - 1 - (i * 40_503) % m).collect();
        assert_eq!(convolve_mod(&a, &b, 400, m), naive(&a, &b, 400, m));
        assert_eq!(convolve_mod(&a, &b, 100, m), naive(&a, &b, 100, m));
    }

    #[test]
    fn max_residues_at_modulus_two_to_32() {
        let m = 1u64 << 32;
        let a = vec![m - 1; 1000];
        assert_eq!(convolve_mod(&a, &a, 1000, m), naive(&a, &a, 1000, m));
    }
}
