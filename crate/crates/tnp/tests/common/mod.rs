#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tnp::catalog::{self, catalog_get, Params};
use tnp::{Algebra, BilinearOp, Field, Scalar};

pub const SWEEP: [&str; 4] = ["-1", "0", "1", "2"];

pub fn params(pairs: &[(&str, &str)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

pub fn get(name: &str) -> Algebra {
    catalog_get(name, None, &Params::new()).unwrap()
}

pub fn get_over(name: &str, f: Field) -> Algebra {
    catalog_get(name, Some(f), &Params::new()).unwrap()
}

pub fn q(n: i64) -> Scalar {
    Field::Rational.from_i64(n)
}

pub fn fields() -> Vec<Field> {
    vec![Field::Rational, Field::prime(3).unwrap(), Field::prime(5).unwrap()]
}

fn values(f: Field) -> Vec<String> {
    match f.elements() {
        Some(es) => es.iter().map(|e| e.to_string()).collect(),
        None => SWEEP.iter().map(|s| s.to_string()).collect(),
    }
}

/// Every parameterized catalog TNP over `f`: table rows over the full
/// sweep, the examples on a coarser grid.
pub fn catalog_tnps(f: Field) -> Vec<Algebra> {
    let vals = values(f);
    let mut out = Vec::new();
    for row in catalog::TABLE_ROWS {
        let name = format!("{row}-tnp");
        let ls: Vec<Option<&String>> = if row == "N6" {
            vals.iter().filter(|l| !matches!(l.as_str(), "0" | "1")).map(Some).collect()
        } else {
            vec![None]
        };
        for l in ls {
            let mut base = Vec::new();
            if let Some(l) = l {
                base.push(("l", l.as_str()));
            }
            if catalog::row_dot_params(row).is_empty() {
                out.push(catalog_get(&name, Some(f), &params(&base)).unwrap());
                continue;
            }
            for m in &vals {
                for n in &vals {
                    let mut p = base.clone();
                    p.extend([("m", m.as_str()), ("n", n.as_str())]);
                    out.push(catalog_get(&name, Some(f), &params(&p)).unwrap());
                }
            }
        }
    }
    for a in &vals {
        out.push(catalog_get("Ex2.5", Some(f), &params(&[("alpha", a)])).unwrap());
    }
    for (a11, a13, a23) in [("1", "0", "0"), ("1", "1", "1"), ("2", "1", "0"), ("0", "1", "2"), ("-1", "2", "1")] {
        let p = params(&[("a11", a11), ("a13", a13), ("a23", a23)]);
        out.push(catalog_get("Ex2.11", Some(f), &p).unwrap());
    }
    for (n, l, k) in [("1", "1", "1"), ("0", "1", "2"), ("2", "0", "-1"), ("-1", "2", "0")] {
        out.push(catalog_get("Ex2.15", Some(f), &params(&[("n", n), ("l", l), ("k", k)])).unwrap());
    }
    out.push(catalog_get("CyclicConv", Some(f), &params(&[("a1", "0"), ("a2", "0"), ("a3", "0")])).unwrap());
    out.push(catalog_get("CyclicConv", Some(f), &Params::new()).unwrap());
    out.push(catalog_get("CyclicConv", Some(f), &params(&[("N", "3"), ("a0", "2"), ("a1", "-1"), ("a2", "1")])).unwrap());
    out
}

/// Novikov-only catalog algebras over `f`, rows swept over their parameters.
pub fn catalog_novikovs(f: Field) -> Vec<Algebra> {
    let vals = values(f);
    let mut out = Vec::new();
    for name in catalog::novikov_entry_names() {
        if name == "N6" {
            for l in vals.iter().filter(|l| !matches!(l.as_str(), "0" | "1")) {
                out.push(catalog_get(name, Some(f), &params(&[("l", l)])).unwrap());
            }
        } else {
            out.push(catalog_get(name, Some(f), &Params::new()).unwrap());
        }
    }
    out
}

/// Catalog algebras carrying a right differential Novikov-Poisson structure.
pub fn catalog_rdnps(f: Field) -> Vec<Algebra> {
    ["EulerRDNP(N=2)", "EulerRDNP(N=3)", "EulerRDNP(N=4)"]
        .into_iter()
        .map(|n| catalog_get(n, Some(f), &Params::new()).unwrap())
        .collect()
}

/// Dense residues of a tensor over GF(p), c[(i*n + j)*n + k].
pub fn dense(op: &BilinearOp, p: u64) -> Vec<u64> {
    let n = op.dim();
    let mut c = vec![0u64; n * n * n];
    for (i, j, k, s) in op.entries() {
        c[(i * n + j) * n + k] = s.to_string().parse::<u64>().unwrap() % p;
    }
    c
}

fn mul(c: &[u64], n: usize, p: u64, x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            let xy = x[i] * y[j] % p;
            if xy == 0 {
                continue;
            }
            for k in 0..n {
                out[k] = (out[k] + xy * c[(i * n + j) * n + k]) % p;
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
}

/// Brute force over every symmetric dot tensor: commutativity by
/// construction, then associativity and both compatibility laws checked
/// directly. Independent of the library's linear stage.
pub fn brute_force_compatible(circ: &[u64], n: usize, p: u64) -> BTreeSet<Vec<u64>> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            pairs.push((i, j));
        }
    }
    let free = pairs.len() * n;
    let total = p.pow(free as u32);
    let mut out = BTreeSet::new();
    for mut code in 0..total {
        let mut d = vec![0u64; n * n * n];
        for &(i, j) in &pairs {
            for k in 0..n {
                let v = code % p;
                code /= p;
                d[(i * n + j) * n + k] = v;
                d[(j * n + i) * n + k] = v;
            }
        }
        if compatible(&d, circ, n, p) {
            out.insert(d);
        }
    }
    out
}

pub fn compatible(d: &[u64], c: &[u64], n: usize, p: u64) -> bool {
    let dm = |x: &[u64], y: &[u64]| mul(d, n, p, x, y);
    let cm = |x: &[u64], y: &[u64]| mul(c, n, p, x, y);
    for a in 0..n {
        for b in 0..n {
            for z in 0..n {
                let (x, y, z) = (unit(n, a), unit(n, b), unit(n, z));
                if dm(&dm(&x, &y), &z) != dm(&x, &dm(&y, &z)) {
                    return false;
                }
                if cm(&dm(&x, &y), &z) != cm(&dm(&x, &z), &y) {
                    return false;
                }
                let lhs: Vec<u64> = dm(&z, &cm(&x, &y)).iter().map(|v| 2 * v % p).collect();
                let r1 = cm(&dm(&z, &x), &y);
                let r2 = cm(&x, &dm(&z, &y));
                let rhs: Vec<u64> = r1.iter().zip(&r2).map(|(a, b)| (a + b) % p).collect();
                if !sub(&lhs, &rhs, p).iter().all(|&v| v == 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// Novikov check in plain residues.
pub fn is_novikov(c: &[u64], n: usize, p: u64) -> bool {
    let cm = |x: &[u64], y: &[u64]| mul(c, n, p, x, y);
    for a in 0..n {
        for b in 0..n {
            for z in 0..n {
                let (x, y, z) = (unit(n, a), unit(n, b), unit(n, z));
                if cm(&cm(&x, &y), &z) != cm(&cm(&x, &z), &y) {
                    return false;
                }
                let l = sub(&cm(&cm(&x, &y), &z), &cm(&x, &cm(&y, &z)), p);
                let r = sub(&cm(&cm(&y, &x), &z), &cm(&y, &cm(&x, &z)), p);
                if l != r {
                    return false;
                }
            }
        }
    }
    true
}

pub fn op_from_dense(f: Field, n: usize, c: &[u64]) -> BilinearOp {
    let mut op = BilinearOp::zero(f, n);
    for (idx, &v) in c.iter().enumerate() {
        if v != 0 {
            op.set(idx / (n * n), (idx / n) % n, idx % n, f.from_i64(v as i64));
        }
    }
    op
}

/// Random rational algebra of the given dimension with entries in {-1, 0, 1}.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> Algebra {
    let f = Field::Rational;
    let mut draw = || {
        let mut op = BilinearOp::zero(f, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v: i64 = rng.gen_range(-1..=1);
                    if v != 0 {
                        op.set(i, j, k, f.from_i64(v));
                    }
                }
            }
        }
        op
    };
    let dot = draw();
    let circ = draw();
    Algebra::new("random", f, n).with_dot(dot).unwrap().with_circ(circ).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank of u64 rows mod p by plain Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, r);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - k * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// dim {φ : φ(x∘y) = δ(φ(x)∘y + x∘φ(y))} over GF(p), with φ(e_c) = Σ_r φ[r][c] e_r
/// flattened as r*n + c. `delta = None` gives the centroid conditions
/// φ(x∘y) = φ(x)∘y = x∘φ(y).
pub fn map_space_dim_mod_p(c: &[u64], n: usize, p: u64, delta: Option<u64>) -> usize {
    let at = |i: usize, j: usize, k: usize| c[(i * n + j) * n + k];
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // φ(e_i∘e_j)_k, (φ(e_i)∘e_j)_k, (e_i∘φ(e_j))_k as rows over φ.
                let mut lhs = vec![0u64; n * n];
                let mut left = vec![0u64; n * n];
                let mut right = vec![0u64; n * n];
                for t in 0..n {
                    lhs[k * n + t] = (lhs[k * n + t] + at(i, j, t)) % p;
                }
                for r in 0..n {
                    left[r * n + i] = (left[r * n + i] + at(r, j, k)) % p;
                    right[r * n + j] = (right[r * n + j] + at(i, r, k)) % p;
                }
                match delta {
                    Some(d) => rows.push(
                        (0..n * n).map(|x| (lhs[x] + p - d * ((left[x] + right[x]) % p) % p) % p).collect(),
                    ),
                    None => {
                        rows.push((0..n * n).map(|x| (lhs[x] + p - left[x]) % p).collect());
                        rows.push((0..n * n).map(|x| (lhs[x] + p - right[x]) % p).collect());
                    }
                }
            }
        }
    }
    n * n - rank_mod_p(rows, p)
}

/// Same space by enumerating every map; only for tiny n and p.
pub fn map_space_dim_brute(c: &[u64], n: usize, p: u64, delta: u64) -> usize {
    let total = p.pow((n * n) as u32);
    let mut count = 0u64;
    for mut code in 0..total {
        let mut phi = vec![0u64; n * n];
        for x in phi.iter_mut() {
            *x = code % p;
            code /= p;
        }
        let apply = |v: &[u64]| -> Vec<u64> {
            (0..n).map(|r| (0..n).map(|cc| phi[r * n + cc] * v[cc]).sum::<u64>() % p).collect()
        };
        let ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let (x, y) = (unit(n, i), unit(n, j));
                let lhs = apply(&mul(c, n, p, &x, &y));
                let a = mul(c, n, p, &apply(&x), &y);
                let b = mul(c, n, p, &x, &apply(&y));
                (0..n).all(|k| lhs[k] == delta * ((a[k] + b[k]) % p) % p)
            })
        });
        count += ok as u64;
    }
    let mut d = 0;
    while p.pow(d) < count {
        d += 1;
    }
    assert_eq!(p.pow(d), count);
    d as usize
}

/// Every Novikov circ tensor of dimension n over GF(p), densely encoded.
pub fn novikov_circs(n: usize, p: u64) -> Vec<Vec<u64>> {
    let len = (n * n * n) as u32;
    (0..p.pow(len))
        .map(|code| (0..len).map(|i| code / p.pow(i) % p).collect::<Vec<u64>>())
        .filter(|c| is_novikov(c, n, p))
        .collect()
}
