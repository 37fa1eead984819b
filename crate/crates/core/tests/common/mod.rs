//! Brute-force oracles and seeded generators shared by the integration
//! tests and the acceptance gate. Nothing here calls the code under test
//! except to build inputs.

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use titsmotive_core::brauer::{CsaDescriptor, LocalData, LocalInvariant, PlaceKind};

// ---------------------------------------------------------------------
// Weyl groups from explicit simple roots

/// Simple roots in the standard realizations, coordinates doubled so that
/// F4 stays integral. Bourbaki numbering.
pub fn simple_roots(series: char, rank: usize) -> Vec<Vec<i64>> {
    let e = |dim: usize, i: usize| {
        let mut v = vec![0i64; dim];
        v[i] = 2;
        v
    };
    let sub = |a: Vec<i64>, b: Vec<i64>| a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>();
    let add = |a: Vec<i64>, b: Vec<i64>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
    match series {
        'A' => (0..rank).map(|i| sub(e(rank + 1, i), e(rank + 1, i + 1))).collect(),
        'B' | 'C' | 'D' => {
            let mut roots: Vec<Vec<i64>> = (0..rank - 1).map(|i| sub(e(rank, i), e(rank, i + 1))).collect();
            roots.push(match series {
                'B' => e(rank, rank - 1),
                'C' => e(rank, rank - 1).iter().map(|x| 2 * x).collect(),
                _ => add(e(rank, rank - 2), e(rank, rank - 1)),
            });
            roots
        }
        'G' => vec![vec![2, -2, 0], vec![-4, 2, 2]],
        'F' => vec![
            vec![0, 2, -2, 0],
            vec![0, 0, 2, -2],
            vec![0, 0, 0, 2],
            vec![1, -1, -1, -1],
        ],
        _ => panic!("no realization for {series}{rank}"),
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// m[i][j] = ⟨α_i, α_j^∨⟩ = 2(α_i, α_j)/(α_j, α_j).
pub fn pairing_matrix(roots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    roots
        .iter()
        .map(|a| {
            roots
                .iter()
                .map(|b| {
                    let (num, den) = (2 * dot(a, b), dot(b, b));
                    assert_eq!(num % den, 0);
                    num / den
                })
                .collect()
        })
        .collect()
}

/// Coefficients of Σ q^ℓ(w) over minimal coset representatives of
/// W / W_{Δ∖Θ}, by breadth-first search on the orbit of a weight whose
/// stabilizer is exactly W_{Δ∖Θ}. `theta` is 0-based.
pub fn coset_poincare(m: &[Vec<i64>], theta: &[usize]) -> Vec<u64> {
    let n = m.len();
    let start: Vec<i64> = (0..n).map(|j| i64::from(theta.contains(&j))).collect();
    let mut dist = BTreeMap::from([(start.clone(), 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(lambda) = queue.pop_front() {
        let d = dist[&lambda];
        for i in 0..n {
            let image: Vec<i64> = (0..n).map(|j| lambda[j] - lambda[i] * m[i][j]).collect();
            if !dist.contains_key(&image) {
                dist.insert(image.clone(), d + 1);
                queue.push_back(image);
            }
        }
    }
    let top = dist.values().copied().max().unwrap_or(0);
    let mut coeffs = vec![0u64; top + 1];
    for d in dist.values() {
        coeffs[*d] += 1;
    }
    coeffs
}

/// Every simple type of rank ≤ 4 with a realization above.
pub fn small_types() -> Vec<(char, usize)> {
    let mut out = Vec::new();
    for r in 1..=4 {
        out.push(('A', r));
    }
    for r in 2..=4 {
        out.push(('B', r));
        out.push(('C', r));
    }
    out.extend([('D', 3), ('D', 4), ('G', 2), ('F', 4)]);
    out
}

// ---------------------------------------------------------------------
// Local solvability

fn vp(mut n: i128, p: i128) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Removes square factors of p.
pub fn strip_squares(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

/// Whether Σ c_i x_i² has a nontrivial zero over Q_p, for coefficients
/// with p-adic valuation 0 or 1.
///
/// A primitive zero may be scaled so that its first unit coordinate k is
/// 1 and earlier coordinates are divisible by p. Hensel's lemma in x_k
/// lifts any such vector with f ≡ 0 mod p^(2δ+1), δ = v_p(2c_k); the
/// converse is reduction. So a finite search modulo p^(2δ+1) decides.
pub fn locally_isotropic(coeffs: &[i64], p: i64) -> bool {
    let mut c: Vec<i128> = coeffs.iter().map(|&x| x as i128).collect();
    let p = p as i128;
    assert!(c.iter().all(|&x| x != 0 && vp(x, p) <= 1));
    c.sort_by_key(|&x| vp(x, p));
    let n = c.len();
    for k in 0..n {
        let delta = vp(2 * c[k], p);
        let modulus = p.pow(2 * delta + 1);
        let ranges: Vec<(i128, i128)> = (0..n)
            .map(|i| match i.cmp(&k) {
                std::cmp::Ordering::Less => (p, modulus / p),
                std::cmp::Ordering::Equal => (1, 1),
                std::cmp::Ordering::Greater => (1, modulus),
            })
            .collect();
        let mut idx = vec![0i128; n];
        loop {
            let value: i128 = (0..n)
                .map(|i| {
                    let x = if i == k { 1 } else { ranges[i].0 * idx[i] };
                    c[i] * x * x
                })
                .sum();
            if value.rem_euclid(modulus) == 0 {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                if i != k && idx[i] + 1 < ranges[i].1 {
                    idx[i] += 1;
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    false
}

/// (a, b)_p for a prime p, or (a, b)_∞ when `p` is `None`, from the
/// solvability of z² = a x² + b y².
pub fn hilbert_oracle(a: i64, b: i64, p: Option<i64>) -> i8 {
    match p {
        None => {
            // real interval scan: a x² + b y² takes a positive value
            let positive = (-2i64..=2).any(|x| (-2i64..=2).any(|y| a * x * x + b * y * y > 0));
            if positive {
                1
            } else {
                -1
            }
        }
        Some(p) => {
            if locally_isotropic(&[strip_squares(a, p), strip_squares(b, p), -1], p) {
                1
            } else {
                -1
            }
        }
    }
}

fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == n)
}

/// Nonzero integer vector with Σ c_i x_i² = 0 and |x_i| ≤ bound: the
/// first n − 1 coordinates range over [0, bound] and the last is solved.
pub fn isotropic_witness(c: &[i64], bound: i64) -> Option<Vec<i64>> {
    let n = c.len();
    let mut x = vec![0i64; n - 1];
    loop {
        let partial: i128 = x.iter().zip(c).map(|(&xi, &ci)| ci as i128 * (xi as i128).pow(2)).sum();
        let last = c[n - 1] as i128;
        if partial % last == 0 {
            let sq = -partial / last;
            if is_square(sq) {
                let r = (sq as f64).sqrt().round() as i64;
                if r <= bound && (r != 0 || x.iter().any(|&v| v != 0)) {
                    let mut w = x.clone();
                    w.push(r);
                    return Some(w);
                }
            }
        }
        let mut i = 0;
        while i < n - 1 {
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == n - 1 {
            return None;
        }
    }
}

pub fn random_coeffs<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vec<i64> {
    (0..dim)
        .map(|_| loop {
            let c = rng.gen_range(-bound..=bound);
            if c != 0 {
                break c;
            }
        })
        .collect()
}

// ---------------------------------------------------------------------
// Algebras and simulated extensions

pub const FINITE_POOL: [&str; 4] = ["v2", "v3", "v5", "v7"];
pub const REAL_PLACE: &str = "inf";
pub const DEGREES: [u64; 6] = [2, 3, 4, 6, 8, 12];

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Random invariant with order dividing `n`.
fn random_invariant<R: Rng>(rng: &mut R, n: u64) -> LocalInvariant {
    let d = *divisors(n).choose(rng).unwrap();
    let num = rng.gen_range(0..d) as i64;
    LocalInvariant::new(num, d).unwrap()
}

/// A random global class of the given degree over the place pool: the
/// last finite place absorbs the sum.
pub fn random_algebra_of_degree<R: Rng>(rng: &mut R, degree: u64) -> CsaDescriptor {
    let mut places = BTreeMap::new();
    let mut sum = LocalInvariant::ZERO;
    if degree % 2 == 0 && rng.gen_bool(0.3) {
        let inv = if rng.gen_bool(0.5) { LocalInvariant::half() } else { LocalInvariant::ZERO };
        places.insert(REAL_PLACE.to_string(), LocalData { kind: PlaceKind::Real, inv });
        sum = sum.add(inv);
    }
    let used = rng.gen_range(2..=FINITE_POOL.len());
    for (k, label) in FINITE_POOL[..used].iter().enumerate() {
        let inv = if k + 1 == used { sum.neg() } else { random_invariant(rng, degree) };
        sum = sum.add(inv);
        places.insert(label.to_string(), LocalData { kind: PlaceKind::Finite, inv });
    }
    CsaDescriptor::new(degree, places).unwrap()
}

pub fn random_algebra<R: Rng>(rng: &mut R) -> CsaDescriptor {
    let degree = *DEGREES.choose(rng).unwrap();
    random_algebra_of_degree(rng, degree)
}

fn map_invariants(a: &CsaDescriptor, f: impl Fn(&str, LocalInvariant) -> LocalInvariant) -> CsaDescriptor {
    let places = a
        .places()
        .iter()
        .map(|(l, d)| (l.clone(), LocalData { kind: d.kind, inv: f(l, d.inv) }))
        .collect();
    CsaDescriptor::new(a.degree(), places).unwrap()
}

/// A second algebra of the same degree, from a mix of constructions that
/// keep all, some, or none of the local orders.
pub fn random_partner<R: Rng>(rng: &mut R, a: &CsaDescriptor, p: u64) -> CsaDescriptor {
    match rng.gen_range(0..5) {
        0 => random_algebra_of_degree(rng, a.degree()),
        1 => a.opposite(),
        2 => {
            // k·[A] with k prime to the index keeps every local order
            let ind = a.index();
            let k = loop {
                let k = rng.gen_range(1..=2 * ind + 1);
                if k.gcd(&ind) == 1 {
                    break k;
                }
            };
            map_invariants(a, |_, inv| inv.times(k))
        }
        3 => {
            // same p-primary parts, fresh prime-to-p parts
            let c = random_algebra_of_degree(rng, a.degree());
            let mut places = BTreeMap::new();
            for (label, data) in a.places().iter().chain(c.places()) {
                let (x, y) = (a.invariant(label), c.invariant(label));
                let inv = x.p_part(p).add(y.add(y.p_part(p).neg()));
                places.insert(label.clone(), LocalData { kind: data.kind, inv });
            }
            CsaDescriptor::new(a.degree(), places).unwrap()
        }
        _ => {
            // p-primary parts multiplied by a unit
            map_invariants(a, |_, inv| {
                let p_part = inv.p_part(p);
                let rest = inv.add(p_part.neg());
                p_part.times(if p == 2 { 3 } else { 2 }).add(rest)
            })
        }
    }
}

/// Local degrees of a random extension: powers of p at finite places
/// (one or two places above each), 1 or 2 at the real place.
pub fn random_local_degrees<R: Rng>(rng: &mut R, p: u64, max_exp: u32) -> BTreeMap<String, Vec<u64>> {
    let mut out = BTreeMap::new();
    for label in FINITE_POOL {
        let slots = rng.gen_range(1..=2);
        out.insert(label.to_string(), (0..slots).map(|_| p.pow(rng.gen_range(0..=max_exp))).collect());
    }
    out.insert(REAL_PLACE.to_string(), vec![rng.gen_range(1..=2)]);
    out
}

/// v_p of the index after the extension, from order arithmetic alone:
/// an invariant of order d becomes one of order d / gcd(d, m) above a
/// place of local degree m; real places of degree 2 become complex.
pub fn extended_vp_index(a: &CsaDescriptor, degrees: &BTreeMap<String, Vec<u64>>, p: u64) -> u32 {
    let mut lcm = 1u64;
    for (label, data) in a.places() {
        let d = data.inv.order();
        for &m in degrees.get(label).map(Vec::as_slice).unwrap_or(&[1]) {
            let order = if data.kind == PlaceKind::Real { if m == 2 { 1 } else { d } } else { d / d.gcd(&m) };
            lcm = lcm.lcm(&order);
        }
    }
    let mut v = 0;
    while lcm % p == 0 {
        lcm /= p;
        v += 1;
    }
    v
}
