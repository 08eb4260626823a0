//! Small finite fields as explicit operation tables.
//!
//! Prime orders use arithmetic mod p. Prime-power orders represent an element
//! as the base-p digits of its polynomial coefficients and reduce modulo a
//! fixed irreducible polynomial:
//!
//! | q | modulus        |
//! |---|----------------|
//! | 4 | x² + x + 1     |
//! | 8 | x³ + x + 1     |
//! | 9 | x² + 1 (mod 3) |
//!
//! Every table is checked against the field axioms when it is built.

use crate::error::{Error, Result};

pub const SUPPORTED_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

/// `(p, m, reduction)` where `x^m = Σ reduction[i]·x^i`.
fn presentation(q: usize) -> Option<(usize, usize, &'static [usize])> {
    match q {
        2 | 3 | 5 | 7 => Some((q, 1, &[])),
        4 => Some((2, 2, &[1, 1])),
        8 => Some((2, 3, &[1, 1, 0])),
        9 => Some((3, 2, &[2, 0])),
        _ => None,
    }
}

fn digits(mut x: usize, p: usize, m: usize) -> Vec<usize> {
    let mut d = Vec::with_capacity(m);
    for _ in 0..m {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, m, reduction) = presentation(q).ok_or(Error::UnsupportedField(q))?;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as u8;

                let mut prod = vec![0usize; 2 * m - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (m..prod.len()).rev() {
                    let c = prod[deg];
                    prod[deg] = 0;
                    for (i, r) in reduction.iter().enumerate() {
                        prod[deg - m + i] = (prod[deg - m + i] + c * r) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..m], p) as u8;
            }
        }
        let field = FiniteField { q, add, mul };
        if let Err(why) = field.check_axioms() {
            return Err(Error::arg(format!("table for q={q} is not a field: {why}")));
        }
        Ok(field)
    }

    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    /// Exhaustive check of the field axioms on the tables.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let q = self.q;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if !(0..q).any(|b| self.add(a, b) == 0) {
                return Err(format!("{a} has no negative"));
            }
            if a != 0 && self.inv(a).is_none() {
                return Err(format!("{a} has no inverse"));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a},{b})"));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("additive associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplicative associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn make_field(q: usize) -> Result<FiniteField> {
    FiniteField::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_is_xor_and() {
        let f = make_field(2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(f.add(a, b), a ^ b);
                assert_eq!(f.mul(a, b), a & b);
            }
        }
    }

    #[test]
    fn prime_fields_are_modular() {
        for q in [3, 5, 7] {
            let f = make_field(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(a, b), (a + b) % q);
                    assert_eq!(f.mul(a, b), (a * b) % q);
                }
            }
        }
    }

    #[test]
    fn gf4_nonzero_cubes_are_one() {
        let f = make_field(4).unwrap();
        for a in 1..4 {
            assert_eq!(f.mul(f.mul(a, a), a), 1);
        }
    }

    #[test]
    fn multiplicative_groups_are_cyclic_of_order_q_minus_1() {
        for q in SUPPORTED_ORDERS {
            let f = make_field(q).unwrap();
            f.check_axioms().unwrap();
            let has_generator = (1..q).any(|g| {
                let mut x = 1;
                let mut seen = std::collections::HashSet::new();
                for _ in 0..q - 1 {
                    x = f.mul(x, g);
                    seen.insert(x);
                }
                seen.len() == q - 1
            });
            assert!(has_generator, "q={q}");
        }
    }

    #[test]
    fn unsupported_orders() {
        for q in [0, 1, 6, 10, 11, 16] {
            assert!(matches!(make_field(q), Err(Error::UnsupportedField(_))));
        }
    }
}
