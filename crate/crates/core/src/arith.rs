//! Divisibility conditions on PBD and triple-system parameters.

use std::fmt;

use crate::design::{pair_count, KSet};
use crate::error::{Error, Result};

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(gcd{k-1}, gcd{k(k-1)})` over `k ∈ K`.
pub fn alpha_beta(k: &KSet) -> Result<(usize, usize)> {
    if k.is_empty() {
        return Err(Error::arg("alpha/beta of an empty block size set"));
    }
    if let Some(bad) = k.iter().find(|&k| k < 2) {
        return Err(Error::arg(format!("block size {bad} < 2")));
    }
    let alpha = k.iter().fold(0, |g, k| gcd(g, k - 1));
    let beta = k.iter().fold(0, |g, k| gcd(g, k * (k - 1)));
    Ok((alpha, beta))
}

/// Necessary conditions for a PBD(v, K): `v-1 ≡ 0 (mod α)` and `v(v-1) ≡ 0 (mod β)`.
pub fn admissible(v: usize, k: &KSet) -> bool {
    match alpha_beta(k) {
        Ok((alpha, beta)) => v >= 1 && (v - 1).is_multiple_of(alpha) && (v * (v - 1)).is_multiple_of(beta),
        Err(_) => false,
    }
}

/// Necessary conditions for a (v, k, λ)-design.
pub fn bibd_admissible(v: usize, k: usize, lambda: usize) -> bool {
    if v < 1 || k < 2 {
        return false;
    }
    (lambda * (v - 1)).is_multiple_of(k - 1) && (lambda * v * (v - 1)).is_multiple_of(k * (k - 1))
}

/// Least admissible index of a triple system on `v` points.
pub fn lambda_min(v: usize) -> usize {
    match v % 6 {
        1 | 3 => 1,
        0 | 4 => 2,
        5 => 3,
        _ => 6,
    }
}

/// A constraint on the number `b_k` of blocks of one size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockCountConstraint {
    Exact { block_size: usize, count: usize },
    Congruent { block_size: usize, modulus: usize, residue: usize },
    /// The pair count cannot be written as a combination of block pair counts.
    Infeasible { modulus: usize },
}

impl fmt::Display for BlockCountConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BlockCountConstraint::Exact { block_size, count } => write!(f, "b{block_size} = {count}"),
            BlockCountConstraint::Congruent { block_size, modulus, residue } => {
                write!(f, "b{block_size} ≡ {residue} (mod {modulus})")
            }
            BlockCountConstraint::Infeasible { modulus } => {
                write!(f, "pair count not realisable (mod {modulus})")
            }
        }
    }
}

fn mod_inverse(a: usize, p: usize) -> usize {
    (1..p).find(|x| (a * x) % p == 1).expect("p prime and a coprime to p")
}

/// Congruences on block counts implied by `Σ_k b_k·k(k-1)/2 = v(v-1)/2`.
///
/// The identity is reduced modulo 2, 3 and 5; whenever exactly one block size
/// has a nonzero coefficient, its count is pinned modulo that prime.
pub fn block_count_congruence(v: usize, k: &KSet) -> Result<Vec<BlockCountConstraint>> {
    if k.is_empty() || k.iter().any(|k| !(3..=5).contains(&k)) {
        return Err(Error::arg(format!("block count congruences need K ⊆ {{3,4,5}}, got {{{k}}}")));
    }
    let pairs = pair_count(v);
    let sizes: Vec<usize> = k.iter().collect();
    if let [size] = sizes[..] {
        let per_block = size * (size - 1) / 2;
        return Ok(vec![if pairs.is_multiple_of(per_block) {
            BlockCountConstraint::Exact { block_size: size, count: pairs / per_block }
        } else {
            BlockCountConstraint::Infeasible { modulus: per_block }
        }]);
    }
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        let nonzero: Vec<(usize, usize)> = sizes
            .iter()
            .map(|&s| (s, (s * (s - 1) / 2) % p))
            .filter(|&(_, c)| c != 0)
            .collect();
        match nonzero[..] {
            [] if !pairs.is_multiple_of(p) => out.push(BlockCountConstraint::Infeasible { modulus: p }),
            [(size, c)] => out.push(BlockCountConstraint::Congruent {
                block_size: size,
                modulus: p,
                residue: (pairs % p) * mod_inverse(c, p) % p,
            }),
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &[usize]) -> KSet {
        KSet::new(s.iter().copied())
    }

    #[test]
    fn alpha_beta_values() {
        assert_eq!(alpha_beta(&k(&[3, 4, 5])).unwrap(), (1, 2));
        assert_eq!(alpha_beta(&k(&[3])).unwrap(), (2, 6));
        assert_eq!(alpha_beta(&k(&[3, 5])).unwrap(), (2, 2));
        assert!(alpha_beta(&KSet::default()).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(!admissible(34, &k(&[3, 5])));
        assert!(admissible(15, &k(&[3])));
        for set in [&[3][..], &[3, 4], &[3, 5], &[4], &[5]] {
            assert!(admissible(1, &k(set)));
        }
        // Steiner triple systems: v ≡ 1, 3 (mod 6)
        for v in 1..60 {
            assert_eq!(admissible(v, &k(&[3])), v % 6 == 1 || v % 6 == 3, "v={v}");
        }
    }

    #[test]
    fn lambda_min_table() {
        assert_eq!(lambda_min(33), 1);
        assert_eq!(lambda_min(35), 3);
        assert_eq!(lambda_min(32), 6);
        assert_eq!(lambda_min(34), 2);
        // λ_min is the least λ with the triple-system conditions satisfied
        for v in 3..100 {
            let least = (1..=6).find(|&l| bibd_admissible(v, 3, l)).unwrap();
            assert_eq!(lambda_min(v), least, "v={v}");
        }
    }

    #[test]
    fn block_counts() {
        let c33 = block_count_congruence(33, &k(&[3, 5])).unwrap();
        assert!(c33.contains(&BlockCountConstraint::Congruent { block_size: 5, modulus: 3, residue: 0 }));
        let c35 = block_count_congruence(35, &k(&[3, 5])).unwrap();
        assert!(c35.contains(&BlockCountConstraint::Congruent { block_size: 5, modulus: 3, residue: 1 }));
        assert_eq!(
            block_count_congruence(7, &k(&[3])).unwrap(),
            vec![BlockCountConstraint::Exact { block_size: 3, count: 7 }]
        );
        assert!(block_count_congruence(7, &k(&[3, 6])).is_err());
    }

    #[test]
    fn block_count_congruences_hold_on_enumerated_solutions() {
        // brute force all (b3, b4, b5) with Σ b_k·C(k,2) = C(v,2)
        for v in 3..40 {
            let pairs = v * (v - 1) / 2;
            for set in [&[3, 4][..], &[3, 5], &[4, 5], &[3, 4, 5]] {
                let kset = k(set);
                let cons = block_count_congruence(v, &kset).unwrap();
                for b3 in 0..=pairs / 3 {
                    for b4 in 0..=pairs / 6 {
                        for b5 in 0..=pairs / 10 {
                            let counts = [(3, b3), (4, b4), (5, b5)];
                            if counts.iter().any(|&(s, b)| b > 0 && !kset.contains(s)) {
                                continue;
                            }
                            if 3 * b3 + 6 * b4 + 10 * b5 != pairs {
                                continue;
                            }
                            for c in &cons {
                                match *c {
                                    BlockCountConstraint::Congruent { block_size, modulus, residue } => {
                                        let b = counts.iter().find(|x| x.0 == block_size).unwrap().1;
                                        assert_eq!(b % modulus, residue, "v={v} K={kset} {c}");
                                    }
                                    BlockCountConstraint::Infeasible { .. } => panic!("solution exists"),
                                    BlockCountConstraint::Exact { .. } => unreachable!(),
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
