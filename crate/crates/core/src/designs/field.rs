//! Table-driven finite fields GF(pᵉ).

use crate::error::{Error, Result};

/// Elements are `0..q`; element `a` encodes the polynomial whose base-`p`
/// digits are its coefficients. `0` and `1` are the field's zero and one.
#[derive(Debug, Clone)]
pub struct GaloisField {
    p: usize,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
}

/// Largest field order the tables are built for.
pub const MAX_ORDER: usize = 1024;

/// Splits `q` into `(p, e)` with `q = pᵉ`, or `None` if `q` is not a prime power.
pub fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Prime-power factorisation `m = Π pᵢ^eᵢ`, as the list of `pᵢ^eᵢ`.
pub fn prime_power_factors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut power = 1;
            while m.is_multiple_of(d) {
                m /= d;
                power *= d;
            }
            out.push(power);
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl GaloisField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::Argument(format!("{q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(Error::Argument(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let e = e as usize;
        let digits = |a: usize| -> Vec<usize> {
            let mut a = a;
            (0..e)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let encode = |coeffs: &[usize]| coeffs.iter().rev().fold(0, |acc, &c| acc * p + c);

        let mut add = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u16;
            }
        }

        // first monic modulus (in encoding order) that makes every nonzero
        // element invertible
        let mut mul = vec![0u16; q * q];
        for tail in 0..q {
            let mut modulus = digits(tail);
            modulus.push(1);
            for a in 0..q {
                let da = digits(a);
                for b in 0..q {
                    let db = digits(b);
                    let mut prod = vec![0usize; 2 * e];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for deg in (e..2 * e).rev() {
                        let lead = prod[deg];
                        if lead != 0 {
                            for (i, c) in modulus.iter().enumerate() {
                                let slot = deg - e + i;
                                prod[slot] = (prod[slot] + p * p - lead * c % p) % p;
                            }
                        }
                    }
                    mul[a * q + b] = encode(&prod[..e]) as u16;
                }
            }
            let is_field = (1..q).all(|a| (1..q).any(|b| mul[a * q + b] == 1));
            if is_field {
                return Ok(GaloisField { p, q, add, mul });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }
}
